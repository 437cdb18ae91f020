//! Expansion systems: generalised Lüroth series (tent, base-r, Lüroth and
//! user partitions), β-expansions with the Parry automaton, and regular
//! continued fractions.

mod beta;
mod cf;
mod gls;
mod spec;

pub use beta::{Admissibility, BetaAutomaton, BetaRunner, BetaSystem};
pub use cf::{cf_convergents, cf_expand, cf_fundamental_interval, CfExpansion};
pub use gls::{GlsBranch, GlsSystem};
pub use spec::{parse_beta, Expansion, System};
