//! The two Wadge-reduction transducers: concatenation of repeated generic
//! prefixes through a right-feeble-specification gluer, and overwriting by a
//! safe symbol; plus the finite-depth dichotomy verifier.

mod alpha;
mod checker;
mod feeble;
mod safe;
mod verify;

pub use alpha::{AlphaLabel, BaireInput};
pub use feeble::{
    pi_feeble, Certified, FeebleReduction, GlueStats, Mode, ReductionTrace, StageRecord, CERTIFY_BUDGET,
};
pub use safe::{pi_safe_symbol, window_gaps, SafeBranch, SafeTrace, SafeWindow, WindowGaps, STALL_FACTOR};
pub use verify::{classify, verify_reduction, BoundaryReport, DichotomyReport, DichotomyVerdict, OSCILLATION_GAP};
