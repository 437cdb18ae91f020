//! Generic points by concatenating good blocks through a
//! right-feeble-specification gluer.

mod gluer;
mod source;
mod synth;

pub use gluer::{BetaGluer, FullShiftGluer, Glued, Gluer};
pub use source::{BlockSource, GoodBlockSampler, SampledBlock, RETRY_BUDGET};
pub use synth::{synthesize_generic, BlockRecord, Schedule, SynthesisLog, Synthesizer};
