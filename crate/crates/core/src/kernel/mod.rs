//! Finite carriers, effect values, and Kleisli structure for the four
//! supported monads: `P`, `P(Σ_τ×Id)`, `P(Σ*×Id)` and `P(Σ*×Id+Σ*)`.

mod effect;
mod embed;
mod fixpoint;
mod laws;
mod morphism;
mod space;

pub use effect::{Effect, MonadKind};
pub use embed::{embed_underline, EnaSurface};
pub use fixpoint::{default_fuel, height_bound, lfp, Fixpoint};
pub use laws::{check_monad_laws, Law, LawReport, LawViolation};
pub use morphism::{Morphism, System};
pub use space::{Alphabet, Label, Letter, StateSpace, Word};
pub(crate) use space::same_alphabet;
