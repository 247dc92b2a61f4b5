use std::fmt;

use super::morphism::Morphism;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Law {
    LeftUnit,
    RightUnit,
    Associativity,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Law::LeftUnit => "1·f = f",
            Law::RightUnit => "f·1 = f",
            Law::Associativity => "h·(g·f) = (h·g)·f",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawViolation {
    pub sample: usize,
    pub law: Law,
}

#[derive(Clone, Debug, Default)]
pub struct LawReport {
    pub samples: usize,
    pub violations: Vec<LawViolation>,
}

impl LawReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

fn unit_laws(f: &Morphism) -> Result<(bool, bool)> {
    let left = Morphism::identity(f.kind(), f.alphabet().clone(), f.target().clone());
    let right = Morphism::identity(f.kind(), f.alphabet().clone(), f.source().clone());
    Ok((Morphism::compose(&left, f)? == *f, Morphism::compose(f, &right)? == *f))
}

/// Checks the unit laws on every component of each triple and associativity
/// of `h·(g·f)` against `(h·g)·f`. Triples must be composable.
pub fn check_monad_laws(samples: &[(Morphism, Morphism, Morphism)]) -> Result<LawReport> {
    let mut report = LawReport { samples: samples.len(), violations: Vec::new() };
    for (i, (f, g, h)) in samples.iter().enumerate() {
        for m in [f, g, h] {
            let (left, right) = unit_laws(m)?;
            if !left {
                report.violations.push(LawViolation { sample: i, law: Law::LeftUnit });
            }
            if !right {
                report.violations.push(LawViolation { sample: i, law: Law::RightUnit });
            }
        }
        let lhs = Morphism::compose(h, &Morphism::compose(g, f)?)?;
        let rhs = Morphism::compose(&Morphism::compose(h, g)?, f)?;
        if lhs != rhs {
            report.violations.push(LawViolation { sample: i, law: Law::Associativity });
        }
    }
    Ok(report)
}
