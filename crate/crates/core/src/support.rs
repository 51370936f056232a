//! Lattices labelled by supports, and the tally of law checks shared by the analysis suites.

use serde::Serialize;

use crate::lattice::Lattice;

/// A set of supported maximal ideals, one bit per ideal.
pub type Mask = u64;

pub const MAX_SUPPORT: usize = 64;

/// Iterates the bit positions of a mask.
pub fn bits(mask: Mask) -> impl Iterator<Item = usize> {
    (0..MAX_SUPPORT).filter(move |&i| mask >> i & 1 == 1)
}

/// A lattice `[R, S]` whose elements carry `MSupp(T/R)` and `MSupp(S/T)`.
#[derive(Debug, Clone)]
pub struct SupportedLattice {
    pub lattice: Lattice,
    /// Names of the maximal ideals in `MSupp(S/R)`; mask bit `i` is `names[i]`.
    pub names: Vec<String>,
    pub lower: Vec<Mask>,
    pub upper: Vec<Mask>,
}

impl SupportedLattice {
    pub fn full(&self) -> Mask {
        if self.names.len() == MAX_SUPPORT {
            Mask::MAX
        } else {
            (1 << self.names.len()) - 1
        }
    }

    pub fn support_count(&self) -> usize {
        self.names.len()
    }

    pub fn names_of(&self, mask: Mask) -> Vec<String> {
        bits(mask).map(|i| self.names[i].clone()).collect()
    }

    pub fn is_split_at(&self, t: usize) -> bool {
        self.lower[t] & self.upper[t] == 0
    }

    /// Elements violating `MSupp(S/R) = MSupp(T/R) ∪ MSupp(S/T)`.
    pub fn union_law_violations(&self) -> Vec<usize> {
        (0..self.lattice.len()).filter(|&t| self.lower[t] | self.upper[t] != self.full()).collect()
    }

    /// All subsets of the support, in increasing numeric order.
    pub fn subsets(&self) -> impl Iterator<Item = Mask> {
        let full = self.full();
        (0..=full).filter(move |x| x & !full == 0)
    }
}

/// Tallies of one named law over many evaluations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub law: String,
    pub evaluated: usize,
    pub failed: usize,
    pub witnesses: Vec<String>,
}

const MAX_WITNESSES: usize = 5;

/// An ordered record of law checks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckLog {
    pub tallies: Vec<Tally>,
}

impl CheckLog {
    pub fn new() -> Self {
        Self::default()
    }

    fn entry(&mut self, law: &str) -> &mut Tally {
        let pos = match self.tallies.iter().position(|t| t.law == law) {
            Some(p) => p,
            None => {
                self.tallies.push(Tally { law: law.to_string(), evaluated: 0, failed: 0, witnesses: Vec::new() });
                self.tallies.len() - 1
            }
        };
        &mut self.tallies[pos]
    }

    /// Records one evaluation of `law`; the witness is only built on failure.
    pub fn check(&mut self, law: &str, ok: bool, witness: impl FnOnce() -> String) -> bool {
        let t = self.entry(law);
        t.evaluated += 1;
        if !ok {
            t.failed += 1;
            if t.witnesses.len() < MAX_WITNESSES {
                t.witnesses.push(witness());
            }
        }
        ok
    }

    pub fn merge(&mut self, other: CheckLog) {
        for t in other.tallies {
            let e = self.entry(&t.law);
            e.evaluated += t.evaluated;
            e.failed += t.failed;
            for w in t.witnesses {
                if e.witnesses.len() < MAX_WITNESSES {
                    e.witnesses.push(w);
                }
            }
        }
    }

    pub fn failures(&self) -> usize {
        self.tallies.iter().map(|t| t.failed).sum()
    }

    pub fn evaluations(&self) -> usize {
        self.tallies.iter().map(|t| t.evaluated).sum()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    /// One line per failing law.
    pub fn failure_summary(&self) -> Vec<String> {
        self.tallies
            .iter()
            .filter(|t| t.failed > 0)
            .map(|t| format!("{}: {}/{} failed; {}", t.law, t.failed, t.evaluated, t.witnesses.join("; ")))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tallies_accumulate_and_merge() {
        let mut a = CheckLog::new();
        a.check("x", true, String::new);
        a.check("x", false, || "w".into());
        let mut b = CheckLog::new();
        b.check("y", true, String::new);
        b.check("x", true, String::new);
        a.merge(b);
        assert_eq!(a.tallies.len(), 2);
        assert_eq!(a.tallies[0].evaluated, 3);
        assert_eq!(a.failures(), 1);
        assert!(!a.passed());
        assert_eq!(bits(0b1010).collect::<Vec<_>>(), vec![1, 3]);
    }
}
