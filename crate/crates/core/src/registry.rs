//! Named algorithm variants for semistability verdicts and isomorphism tests,
//! selected at runtime (for example by the CLI's `--strategy` flag).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gitdecide::{exhaustive_verdict, rational_verdict, semistability_verdict, SearchConfig, Verdict};
use crate::sigmamod::{iso_bounded, iso_exhaustive, IsoOutcome, SigmaModule};

pub trait SemistabilityStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn decide(&self, q: &SigmaModule, config: &SearchConfig) -> Result<Verdict>;
}

pub trait IsomorphismStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn decide(&self, a: &SigmaModule, b: &SigmaModule, config: &SearchConfig) -> Result<IsoOutcome>;
}

pub struct Exhaustive;

impl SemistabilityStrategy for Exhaustive {
    fn name(&self) -> &'static str {
        "exhaustive"
    }
    fn description(&self) -> &'static str {
        "enumerate every subspace over F_p"
    }
    fn decide(&self, q: &SigmaModule, config: &SearchConfig) -> Result<Verdict> {
        exhaustive_verdict(q, config.enum_bound)
    }
}

pub struct Reduction;

impl SemistabilityStrategy for Reduction {
    fn name(&self) -> &'static str {
        "reduction"
    }
    fn description(&self) -> &'static str {
        "rational witnesses, certified by reduction modulo primes"
    }
    fn decide(&self, q: &SigmaModule, config: &SearchConfig) -> Result<Verdict> {
        rational_verdict(q, config)
    }
}

pub struct AutoVerdict;

impl SemistabilityStrategy for AutoVerdict {
    fn name(&self) -> &'static str {
        "auto"
    }
    fn description(&self) -> &'static str {
        "exhaustive over F_p, reduction over Q"
    }
    fn decide(&self, q: &SigmaModule, config: &SearchConfig) -> Result<Verdict> {
        semistability_verdict(q, config)
    }
}

pub struct Backtrack;

impl IsomorphismStrategy for Backtrack {
    fn name(&self) -> &'static str {
        "backtrack"
    }
    fn description(&self) -> &'static str {
        "complete column-by-column search over F_p"
    }
    fn decide(&self, a: &SigmaModule, b: &SigmaModule, config: &SearchConfig) -> Result<IsoOutcome> {
        iso_exhaustive(a, b, config.enum_bound)
    }
}

pub struct Bounded;

impl IsomorphismStrategy for Bounded {
    fn name(&self) -> &'static str {
        "bounded"
    }
    fn description(&self) -> &'static str {
        "invariants plus a search over small-integer witnesses"
    }
    fn decide(&self, a: &SigmaModule, b: &SigmaModule, config: &SearchConfig) -> Result<IsoOutcome> {
        iso_bounded(a, b, config.height, config.iso_budget)
    }
}

pub struct AutoIso;

impl IsomorphismStrategy for AutoIso {
    fn name(&self) -> &'static str {
        "auto"
    }
    fn description(&self) -> &'static str {
        "backtrack over F_p, bounded over Q"
    }
    fn decide(&self, a: &SigmaModule, b: &SigmaModule, config: &SearchConfig) -> Result<IsoOutcome> {
        if a.field().is_finite() {
            Backtrack.decide(a, b, config)
        } else {
            Bounded.decide(a, b, config)
        }
    }
}

pub struct StrategyRegistry {
    semistability: BTreeMap<&'static str, Box<dyn SemistabilityStrategy>>,
    isomorphism: BTreeMap<&'static str, Box<dyn IsomorphismStrategy>>,
}

impl StrategyRegistry {
    pub fn empty() -> Self {
        StrategyRegistry {
            semistability: BTreeMap::new(),
            isomorphism: BTreeMap::new(),
        }
    }

    pub fn with_defaults() -> Self {
        let mut r = Self::empty();
        r.register_semistability(Box::new(Exhaustive));
        r.register_semistability(Box::new(Reduction));
        r.register_semistability(Box::new(AutoVerdict));
        r.register_isomorphism(Box::new(Backtrack));
        r.register_isomorphism(Box::new(Bounded));
        r.register_isomorphism(Box::new(AutoIso));
        r
    }

    pub fn register_semistability(&mut self, s: Box<dyn SemistabilityStrategy>) {
        self.semistability.insert(s.name(), s);
    }

    pub fn register_isomorphism(&mut self, s: Box<dyn IsomorphismStrategy>) {
        self.isomorphism.insert(s.name(), s);
    }

    pub fn semistability(&self, name: &str) -> Result<&dyn SemistabilityStrategy> {
        self.semistability
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownStrategy(name.to_string()))
    }

    pub fn isomorphism(&self, name: &str) -> Result<&dyn IsomorphismStrategy> {
        self.isomorphism
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownStrategy(name.to_string()))
    }

    pub fn semistability_names(&self) -> Vec<&'static str> {
        self.semistability.keys().copied().collect()
    }

    pub fn isomorphism_names(&self) -> Vec<&'static str> {
        self.isomorphism.keys().copied().collect()
    }
}

impl Default for StrategyRegistry {
    fn default() -> Self {
        Self::with_defaults()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gitdecide::Status;
    use crate::linalg::{ExactField, Matrix};
    use crate::sigmamod::Sign;

    #[test]
    fn lookup_and_dispatch() {
        let r = StrategyRegistry::with_defaults();
        assert_eq!(r.semistability_names(), vec!["auto", "exhaustive", "reduction"]);
        assert_eq!(r.isomorphism_names(), vec!["auto", "backtrack", "bounded"]);
        assert!(matches!(r.semistability("magic"), Err(Error::UnknownStrategy(_))));

        let f3 = ExactField::Prime(3);
        let h = SigmaModule::single(Sign::Plus, Matrix::from_i64(f3, &[&[0, 1], &[1, 0]])).unwrap();
        let cfg = SearchConfig::default();
        let v = r.semistability("exhaustive").unwrap().decide(&h, &cfg).unwrap();
        assert_eq!(v.status, Status::StrictlySemistable);
        assert!(r.semistability("reduction").unwrap().decide(&h, &cfg).is_err());
    }

    #[test]
    fn bounded_iso_never_says_no_without_an_invariant() {
        let q = ExactField::Rational;
        let a = SigmaModule::single(Sign::Plus, Matrix::from_i64(q, &[&[1, 0], &[0, 1]])).unwrap();
        let b = SigmaModule::single(Sign::Plus, Matrix::from_i64(q, &[&[2, 1], &[1, 1]])).unwrap();
        let r = StrategyRegistry::with_defaults();
        let out = r
            .isomorphism("bounded")
            .unwrap()
            .decide(&a, &b, &SearchConfig::default())
            .unwrap();
        // [[2,1],[1,1]] = fᵀf with f = [[1,1],[1,0]].
        assert!(out.is_yes());
        let c = SigmaModule::single(Sign::Plus, Matrix::from_i64(q, &[&[1, 0], &[0, 2]])).unwrap();
        let out = r
            .isomorphism("bounded")
            .unwrap()
            .decide(&a, &c, &SearchConfig::default())
            .unwrap();
        assert_eq!(out, IsoOutcome::No);
    }
}
