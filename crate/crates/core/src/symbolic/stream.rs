use std::fmt;
use std::io::{BufRead, Write};

use super::{Digit, Symbol};
use crate::error::{Error, Result};

/// Source of symbols behind a [`DigitStream`].
pub trait Producer: Send {
    /// Appends symbols to `buf` until it holds at least `target` of them.
    /// Finite sources stop early; the stream reports the shortfall.
    fn extend(&mut self, buf: &mut Vec<Symbol>, target: usize) -> Result<()>;
}

/// A fixed, finite sequence of symbols.
pub struct VecProducer {
    data: Vec<Symbol>,
}

impl VecProducer {
    pub fn new(data: Vec<Symbol>) -> Self {
        VecProducer { data }
    }
}

impl Producer for VecProducer {
    fn extend(&mut self, buf: &mut Vec<Symbol>, target: usize) -> Result<()> {
        let end = target.min(self.data.len());
        if buf.len() < end {
            buf.extend_from_slice(&self.data[buf.len()..end]);
        }
        Ok(())
    }
}

/// Symbol at position `i` given by a closure.
pub struct FnProducer<F> {
    f: F,
}

impl<F: Fn(usize) -> Symbol + Send> FnProducer<F> {
    pub fn new(f: F) -> Self {
        FnProducer { f }
    }
}

impl<F: Fn(usize) -> Symbol + Send> Producer for FnProducer<F> {
    fn extend(&mut self, buf: &mut Vec<Symbol>, target: usize) -> Result<()> {
        for i in buf.len()..target {
            buf.push((self.f)(i));
        }
        Ok(())
    }
}

/// A lazily materialised one-sided sequence `x_0 x_1 x_2 …`.
///
/// Prefixes are cached, so asking for the same length twice returns the
/// same symbols. A stream has a single consumer; concurrent analyses build
/// independent streams from the same deterministic specification.
pub struct DigitStream {
    buf: Vec<Symbol>,
    producer: Box<dyn Producer>,
}

impl DigitStream {
    pub fn new(producer: impl Producer + 'static) -> Self {
        DigitStream {
            buf: Vec::new(),
            producer: Box::new(producer),
        }
    }

    /// A finite stream; requests past its end fail with `StreamExhausted`.
    pub fn from_vec(data: Vec<Symbol>) -> Self {
        DigitStream::new(VecProducer::new(data))
    }

    /// `pattern^∞`.
    pub fn periodic(pattern: Vec<Symbol>) -> Self {
        assert!(!pattern.is_empty(), "periodic pattern must be nonempty");
        DigitStream::new(FnProducer::new(move |i| pattern[i % pattern.len()]))
    }

    pub fn from_fn(f: impl Fn(usize) -> Symbol + Send + 'static) -> Self {
        DigitStream::new(FnProducer::new(f))
    }

    /// `x[0, n)`.
    pub fn prefix(&mut self, n: usize) -> Result<&[Symbol]> {
        if self.buf.len() < n {
            self.producer.extend(&mut self.buf, n)?;
            if self.buf.len() < n {
                return Err(Error::StreamExhausted {
                    available: self.buf.len(),
                    requested: n,
                });
            }
        }
        Ok(&self.buf[..n])
    }

    pub fn get(&mut self, i: usize) -> Result<Symbol> {
        Ok(self.prefix(i + 1)?[i])
    }

    /// Symbols materialised so far.
    pub fn materialized(&self) -> &[Symbol] {
        &self.buf
    }
}

impl fmt::Debug for DigitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DigitStream")
            .field("materialized", &self.buf.len())
            .finish()
    }
}

/// Parses whitespace-separated digit tokens (`inf` for the sentinel).
pub fn parse_digit_tokens(text: &str) -> Result<Vec<Digit>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        for tok in line.split_whitespace() {
            if tok == "inf" {
                out.push(Digit::Inf);
            } else {
                let v: Symbol = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad digit token {tok:?}")))?;
                out.push(Digit::Int(v));
            }
        }
    }
    Ok(out)
}

/// Reads the digit-stream text format: one token per whitespace-separated
/// field, `inf` for the sentinel, `#` starting a comment line.
pub fn read_stream_text(reader: impl BufRead) -> Result<Vec<Digit>> {
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line.map_err(|e| Error::Parse(e.to_string()))?;
        out.extend(parse_digit_tokens(&line)?);
    }
    Ok(out)
}

/// Writes digits in the text format, `header` lines first as comments.
pub fn write_stream_text<'a>(
    mut writer: impl Write,
    header: &[String],
    digits: impl IntoIterator<Item = &'a Digit>,
) -> std::io::Result<()> {
    for h in header {
        writeln!(writer, "# {h}")?;
    }
    let mut col = 0;
    for d in digits {
        if col > 0 {
            write!(writer, " ")?;
        }
        write!(writer, "{d}")?;
        col += 1;
        if col == 64 {
            writeln!(writer)?;
            col = 0;
        }
    }
    if col > 0 {
        writeln!(writer)?;
    }
    Ok(())
}
