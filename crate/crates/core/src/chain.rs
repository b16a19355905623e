//! Formal chains: lists of (support, rational function) pairs together with
//! a divisor ledger. The ledger is a multiset of zero/pole tokens with
//! integer multiplicities; a chain satisfies the cocycle condition exactly
//! when its ledger sums to zero.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::Field;
use crate::projective::{ProjLine, ProjPoint};
use crate::scene::RationalFunc;

/// What a chain component is supported on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupportDesc<K: Field> {
    /// The curve of cone lines over `C_i` inside the Fano variety.
    ConeCurve { i: u8 },
    /// The divisor of lines meeting the cone over `C_i` (implicit: it is
    /// never materialized as an equation, only as a membership predicate).
    LinesMeetingCone { i: u8 },
    /// The divisor `C_i + S` of the Hilbert square.
    CurvePlusSurface { i: u8 },
    /// The curve `C_i + p` of the Hilbert square.
    CurvePlusPoint { i: u8, p: ProjPoint<K> },
}

/// Zero/pole tokens appearing in divisor ledgers.
///
/// Tokens compare exactly (canonical coordinates), so formal cancellation
/// is decidable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum LedgerKey<K: Field> {
    /// A line, keyed by its canonical Pluecker vector.
    Line(Vec<K>),
    /// The divisor `(p) + S` of the Hilbert square.
    DivisorPlusS(ProjPoint<K>),
    /// A reduced point pair of the Hilbert square (stored sorted).
    Pair(ProjPoint<K>, ProjPoint<K>),
}

impl<K: Field> LedgerKey<K> {
    pub fn line(l: &ProjLine<K>) -> Self {
        LedgerKey::Line(l.plucker().to_vec())
    }

    pub fn pair(a: ProjPoint<K>, b: ProjPoint<K>) -> Self {
        if a <= b {
            LedgerKey::Pair(a, b)
        } else {
            LedgerKey::Pair(b, a)
        }
    }
}

#[derive(Debug, Clone)]
pub struct ChainComponent<K: Field> {
    pub support: SupportDesc<K>,
    pub func: RationalFunc<K>,
}

/// A formal sum of (support, function) pairs with its divisor ledger.
#[derive(Debug, Clone)]
pub struct Chain<K: Field> {
    pub components: Vec<ChainComponent<K>>,
    ledger: BTreeMap<LedgerKey<K>, i64>,
}

impl<K: Field> Chain<K> {
    pub fn new(components: Vec<ChainComponent<K>>) -> Self {
        Chain {
            components,
            ledger: BTreeMap::new(),
        }
    }

    pub fn add_ledger(&mut self, key: LedgerKey<K>, mult: i64) {
        let entry = self.ledger.entry(key).or_insert(0);
        *entry += mult;
        if *entry == 0 {
            self.ledger.retain(|_, m| *m != 0);
        }
    }

    /// Remaining (non-cancelled) ledger entries.
    pub fn ledger(&self) -> &BTreeMap<LedgerKey<K>, i64> {
        &self.ledger
    }

    /// The cocycle condition: every token cancelled.
    pub fn ledger_is_zero(&self) -> bool {
        self.ledger.values().all(|m| *m == 0)
    }
}

impl<K: Field> fmt::Display for Chain<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "chain[{} components, {} open ledger entries]",
            self.components.len(),
            self.ledger.iter().filter(|(_, m)| **m != 0).count()
        )
    }
}
