//! The convention ledger: every ambiguous sign, order or arity reading, resolved by
//! the certifying suites and frozen as a text fixture.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProductOrder {
    /// μ₂(τ_{U₁}, τ_{U₂}) exactly as displayed in the boundary of τ_U.
    Literal,
    /// μ₂(τ_{U₂}, τ_{U₁}): the composable reading, U₁ traversed first.
    Swapped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Leibniz {
    /// ∂(xy) = ∂x·y + (−1)^{|x|} x·∂y
    Left,
    /// ∂(xy) = (−1)^{|y|} ∂x·y + x·∂y
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ArityReading {
    /// the operation applied has as many inputs as listed arguments
    Arguments,
    /// the subscript d−j−1 is taken literally, the argument list shortened to match
    Subscript,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IotaTwist {
    /// (−1)^i carried by G on length-one words, ∂ι(w) = ι(∂w)
    InG,
    /// ι intertwines the negated differential, G(a) = ι(a)
    InBoundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Conventions {
    pub d1_order: ProductOrder,
    pub d1_leibniz: Leibniz,
    pub d2_arity: ArityReading,
    /// constant flip of the first split piece
    pub d5_split_first: bool,
    /// constant flip of the second split piece
    pub d5_split_second: bool,
    /// Koszul term |g|(|X|+|R|) on the second split piece
    pub d5_split_koszul: bool,
    /// Koszul term |σ₁||σ₂| in the transposition identification
    pub d5_transpose_koszul: bool,
    pub d6_parity: bool,
    pub iota_twist: IotaTwist,
    /// add k to the exponent of the τ-word sum of T
    pub t_tau_shift: bool,
    /// add 1 to the exponent of π_(A,B) in T
    pub t_pi_ab_flip: bool,
    /// add 1 to the exponent of π_(B,A) in T
    pub t_pi_ba_flip: bool,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions::resolved()
    }
}

pub const ENTRY_NAMES: [&str; 12] = [
    "d1_product_order",
    "d1_leibniz",
    "d2_arity",
    "d5_split_first_flip",
    "d5_split_second_flip",
    "d5_split_koszul",
    "d5_transpose_koszul",
    "d6_global_parity",
    "iota_twist",
    "t_tau_shift",
    "t_pi_ab_flip",
    "t_pi_ba_flip",
];

impl Conventions {
    /// The assignment certified by the harness (see `ledger.txt`).
    pub fn resolved() -> Self {
        Conventions {
            d1_order: ProductOrder::Swapped,
            d1_leibniz: Leibniz::Left,
            d2_arity: ArityReading::Arguments,
            d5_split_first: false,
            d5_split_second: false,
            d5_split_koszul: true,
            d5_transpose_koszul: true,
            d6_parity: false,
            iota_twist: IotaTwist::InG,
            t_tau_shift: true,
            t_pi_ab_flip: true,
            t_pi_ba_flip: false,
        }
    }

    /// Signs of T exactly as printed, other entries as resolved.
    pub fn printed_t() -> Self {
        Conventions { t_tau_shift: false, t_pi_ab_flip: false, t_pi_ba_flip: false, ..Self::resolved() }
    }

    pub fn bits(&self) -> [bool; 12] {
        [
            self.d1_order == ProductOrder::Swapped,
            self.d1_leibniz == Leibniz::Right,
            self.d2_arity == ArityReading::Subscript,
            self.d5_split_first,
            self.d5_split_second,
            self.d5_split_koszul,
            self.d5_transpose_koszul,
            self.d6_parity,
            self.iota_twist == IotaTwist::InBoundary,
            self.t_tau_shift,
            self.t_pi_ab_flip,
            self.t_pi_ba_flip,
        ]
    }

    pub fn from_bits(b: [bool; 12]) -> Self {
        Conventions {
            d1_order: if b[0] { ProductOrder::Swapped } else { ProductOrder::Literal },
            d1_leibniz: if b[1] { Leibniz::Right } else { Leibniz::Left },
            d2_arity: if b[2] { ArityReading::Subscript } else { ArityReading::Arguments },
            d5_split_first: b[3],
            d5_split_second: b[4],
            d5_split_koszul: b[5],
            d5_transpose_koszul: b[6],
            d6_parity: b[7],
            iota_twist: if b[8] { IotaTwist::InBoundary } else { IotaTwist::InG },
            t_tau_shift: b[9],
            t_pi_ab_flip: b[10],
            t_pi_ba_flip: b[11],
        }
    }

    pub fn flipped(&self, entry: usize) -> Self {
        let mut b = self.bits();
        b[entry] = !b[entry];
        Self::from_bits(b)
    }

    pub fn value_string(&self, entry: usize) -> String {
        match entry {
            0 => match self.d1_order {
                ProductOrder::Literal => "literal",
                ProductOrder::Swapped => "swapped",
            }
            .into(),
            1 => match self.d1_leibniz {
                Leibniz::Left => "left",
                Leibniz::Right => "right",
            }
            .into(),
            2 => match self.d2_arity {
                ArityReading::Arguments => "arguments",
                ArityReading::Subscript => "subscript",
            }
            .into(),
            8 => match self.iota_twist {
                IotaTwist::InG => "in_g",
                IotaTwist::InBoundary => "in_boundary",
            }
            .into(),
            e => (self.bits()[e] as u8).to_string(),
        }
    }

    fn set_from_string(&mut self, entry: usize, v: &str) -> Result<(), LedgerError> {
        let bad = || LedgerError::Value(ENTRY_NAMES[entry].to_string(), v.to_string());
        let mut b = self.bits();
        b[entry] = match (entry, v) {
            (0, "literal") => false,
            (0, "swapped") => true,
            (1, "left") => false,
            (1, "right") => true,
            (2, "arguments") => false,
            (2, "subscript") => true,
            (8, "in_g") => false,
            (8, "in_boundary") => true,
            (0..=2 | 8, _) => return Err(bad()),
            (_, "0") => false,
            (_, "1") => true,
            _ => return Err(bad()),
        };
        *self = Self::from_bits(b);
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LedgerError {
    #[error("line {0}: expected `name = value # certified-by: suite`")]
    Syntax(usize),
    #[error("unknown ledger entry {0}")]
    Unknown(String),
    #[error("entry {0}: bad value {1}")]
    Value(String, String),
    #[error("entry {0} missing")]
    Missing(String),
}

/// Ledger entries with the suite that certified each and its status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConventionLedger {
    pub conventions: Conventions,
    pub certified_by: BTreeMap<String, String>,
    pub status: BTreeMap<String, bool>,
}

pub const LEDGER_HEADER: &str = "# convention ledger v1";

impl ConventionLedger {
    pub fn new(conventions: Conventions, certified_by: BTreeMap<String, String>, status: BTreeMap<String, bool>) -> Self {
        ConventionLedger { conventions, certified_by, status }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(LEDGER_HEADER);
        s.push('\n');
        for (e, name) in ENTRY_NAMES.iter().enumerate() {
            let suite = &self.certified_by[*name];
            let ok = self.status.get(suite).copied().unwrap_or(false);
            s.push_str(&format!(
                "{} = {} # certified-by: {} ({})\n",
                name,
                self.conventions.value_string(e),
                suite,
                if ok { "pass" } else { "fail" }
            ));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, LedgerError> {
        let mut conv = Conventions::resolved();
        let mut seen = vec![false; ENTRY_NAMES.len()];
        let mut certified_by = BTreeMap::new();
        let mut status = BTreeMap::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (lhs, rest) = line.split_once('=').ok_or(LedgerError::Syntax(ln + 1))?;
            let (value, comment) = rest.split_once('#').ok_or(LedgerError::Syntax(ln + 1))?;
            let suite_part = comment.trim().strip_prefix("certified-by:").ok_or(LedgerError::Syntax(ln + 1))?;
            let mut it = suite_part.split_whitespace();
            let suite = it.next().ok_or(LedgerError::Syntax(ln + 1))?.to_string();
            let ok = it.next().map(|s| s == "(pass)").unwrap_or(false);
            let name = lhs.trim();
            let e = ENTRY_NAMES.iter().position(|n| *n == name).ok_or_else(|| LedgerError::Unknown(name.into()))?;
            conv.set_from_string(e, value.trim())?;
            seen[e] = true;
            status.insert(suite.clone(), ok);
            certified_by.insert(name.to_string(), suite);
        }
        if let Some(e) = seen.iter().position(|s| !s) {
            return Err(LedgerError::Missing(ENTRY_NAMES[e].to_string()));
        }
        Ok(ConventionLedger { conventions: conv, certified_by, status })
    }
}

impl fmt::Display for ConventionLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
