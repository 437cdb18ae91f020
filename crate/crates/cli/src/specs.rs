use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use symdyn_core::measures::{sample_stream, Oracle};
use symdyn_core::numeration::{parse_beta, BetaSystem};
use symdyn_core::symbolic::{read_stream_text, write_stream_text};
use symdyn_core::synthesis::{BetaGluer, FullShiftGluer, GoodBlockSampler, Gluer, Schedule, Synthesizer};
use symdyn_core::{Alphabet, Digit, DigitStream, Error, Symbol};

/// `full` (alphabet of the given oracle), `full:<r>`, or `beta:<β>`.
pub fn parse_gluer(spec: &str, alphabet: Alphabet, precision: u32) -> Result<Arc<dyn Gluer>> {
    let spec = spec.trim();
    if spec == "full" {
        return Ok(Arc::new(FullShiftGluer::new(alphabet)));
    }
    if let Some(r) = spec.strip_prefix("full:") {
        let r: u64 = r.parse().with_context(|| format!("bad alphabet size {r:?}"))?;
        return Ok(Arc::new(FullShiftGluer::new(Alphabet::finite(r))));
    }
    if let Some(b) = spec.strip_prefix("beta:") {
        let sys = BetaSystem::new(b, parse_beta(b)?, precision)?;
        return Ok(Arc::new(BetaGluer::new(sys)));
    }
    bail!(Error::Parse(format!("unknown gluer {spec:?}; expected full, full:<r> or beta:<β>")))
}

/// Chunk length for sampled streams: independent chunks are only generic
/// for product measures, so other measures get one long sample path.
fn chunk_for(oracle: &Oracle) -> usize {
    let label = oracle.label();
    if label.starts_with("bernoulli") || label.starts_with("dirac") {
        4096
    } else {
        1 << 22
    }
}

/// A stream spec:
///
/// ```text
/// sample            seeded sample of the oracle
/// synth             synthesized generic point (gluer from --gluer)
/// file:<path>       digit-stream text file
/// periodic:<w>      w^∞, digits separated by commas or given compactly (01)
/// ```
pub fn parse_stream(spec: &str, oracle: &Oracle, gluer: &Arc<dyn Gluer>, seed: u64) -> Result<DigitStream> {
    let spec = spec.trim();
    match spec {
        "sample" => return Ok(sample_stream(oracle.clone(), seed, chunk_for(oracle))),
        "synth" => {
            let src = Box::new(GoodBlockSampler::new(oracle.clone(), seed));
            return Ok(Synthesizer::new(src, gluer.clone(), Schedule::default()).into_stream());
        }
        _ => {}
    }
    if let Some(path) = spec.strip_prefix("file:") {
        return Ok(DigitStream::from_vec(read_symbols(Path::new(path))?));
    }
    if let Some(w) = spec.strip_prefix("periodic:") {
        let digits: Vec<Symbol> = if w.contains(',') {
            w.split(',')
                .map(|t| t.trim().parse())
                .collect::<std::result::Result<_, _>>()
                .with_context(|| format!("bad periodic word {w:?}"))?
        } else {
            w.chars()
                .map(|c| c.to_digit(10).map(Symbol::from))
                .collect::<Option<_>>()
                .with_context(|| format!("bad periodic word {w:?}"))?
        };
        if digits.is_empty() {
            bail!(Error::EmptyWord);
        }
        return Ok(DigitStream::periodic(digits));
    }
    bail!(Error::Parse(format!("unknown stream spec {spec:?}")))
}

/// Reads a stream file; the `inf` sentinel is not a countable symbol.
pub fn read_symbols(path: &Path) -> Result<Vec<Symbol>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let digits = read_stream_text(BufReader::new(f))?;
    digits
        .iter()
        .enumerate()
        .map(|(i, d)| {
            d.as_symbol()
                .ok_or_else(|| Error::Parse(format!("{}: `inf` at position {i}", path.display())).into())
        })
        .collect()
}

pub fn write_symbols(path: &Path, header: &[String], symbols: &[Symbol]) -> Result<()> {
    let digits: Vec<Digit> = symbols.iter().map(|&s| Digit::Int(s)).collect();
    write_digits(path, header, &digits)
}

pub fn write_digits(path: &Path, header: &[String], digits: &[Digit]) -> Result<()> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_stream_text(BufWriter::new(f), header, digits).with_context(|| format!("writing {}", path.display()))
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
