//! Systems of strict homogeneous linear inequalities over `(x, y, δ)`.
//!
//! Arithmetic is over the rationals. An assignment may give δ the value of a
//! positive infinitesimal ε; every expression then evaluates to a pair
//! `(standard part, ε-coefficient)` compared lexicographically against zero.

use crate::error::{Error, Result};
use crate::numeric::{format_rational, parse_rational, rational_str, rational_vec, Rational};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    /// `expr > 0`
    Gt,
    /// `expr < 0`
    Lt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Group {
    G1,
    G2,
    G3,
    G4,
    G5,
}

impl Group {
    pub const ALL: [Group; 5] = [Group::G1, Group::G2, Group::G3, Group::G4, Group::G5];

    pub fn name(self) -> &'static str {
        match self {
            Group::G1 => "G1",
            Group::G2 => "G2",
            Group::G3 => "G3",
            Group::G4 => "G4",
            Group::G5 => "G5",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inequality {
    #[serde(with = "rational_vec")]
    pub coeff_x: Vec<Rational>,
    #[serde(with = "rational_str")]
    pub coeff_y: Rational,
    #[serde(with = "rational_str")]
    pub coeff_delta: Rational,
    pub sense: Sense,
    #[serde(with = "rational_str")]
    pub rhs: Rational,
    pub group: Group,
    /// Identifies the source inequality this row is a copy of.
    pub copies_of: String,
}

impl Inequality {
    /// `(standard part, ε-coefficient)` of `lhs − rhs`.
    pub fn evaluate(&self, a: &LhpAssignment) -> (Rational, Rational) {
        let mut std_part: Rational = self
            .coeff_x
            .iter()
            .zip(&a.x_values)
            .map(|(c, x)| c * x)
            .fold(Rational::zero(), |acc, v| acc + v);
        std_part += &self.coeff_y * &a.y_value;
        std_part -= &self.rhs;
        let eps = match &a.delta_value {
            Delta::Exact(d) => {
                std_part += &self.coeff_delta * d;
                Rational::zero()
            }
            Delta::Infinitesimal => self.coeff_delta.clone(),
        };
        (std_part, eps)
    }

    pub fn holds(&self, a: &LhpAssignment) -> bool {
        let (s, e) = self.evaluate(a);
        let sign = match s.cmp(&Rational::zero()) {
            Ordering::Equal => e.cmp(&Rational::zero()),
            other => other,
        };
        match self.sense {
            Sense::Gt => sign == Ordering::Greater,
            Sense::Lt => sign == Ordering::Less,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LhpParts {
    num_x: usize,
    u_param: u64,
    gap: i64,
    inequalities: Vec<Inequality>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LhpParts", into = "LhpParts")]
pub struct LhpSystem {
    num_x: usize,
    u_param: u64,
    gap: i64,
    inequalities: Vec<Inequality>,
}

impl TryFrom<LhpParts> for LhpSystem {
    type Error = Error;
    fn try_from(p: LhpParts) -> Result<Self> {
        LhpSystem::new(p.num_x, p.u_param, p.gap, p.inequalities)
    }
}

impl From<LhpSystem> for LhpParts {
    fn from(s: LhpSystem) -> Self {
        LhpParts {
            num_x: s.num_x,
            u_param: s.u_param,
            gap: s.gap,
            inequalities: s.inequalities,
        }
    }
}

impl LhpSystem {
    pub fn new(
        num_x: usize,
        u_param: u64,
        gap: i64,
        inequalities: Vec<Inequality>,
    ) -> Result<Self> {
        if u_param == 0 {
            return Err(Error::MalformedInstance("U must be at least 1".into()));
        }
        if let Some(i) = inequalities
            .iter()
            .position(|q| q.coeff_x.len() != num_x || !q.rhs.is_zero())
        {
            return Err(Error::MalformedInstance(format!(
                "inequality {i} has the wrong width or a nonzero right-hand side"
            )));
        }
        let s = Self {
            num_x,
            u_param,
            gap,
            inequalities,
        };
        let u = u_param as usize;
        let count = |g| s.group_count(g);
        let g2 = count(Group::G2);
        if count(Group::G1) != 2 * u
            || g2 % (2 * u) != 0
            || count(Group::G3) != 2 * u * num_x
            || count(Group::G4) != 2 * num_x
            || count(Group::G5) != u
        {
            return Err(Error::MalformedInstance(
                "group cardinalities do not match the construction".into(),
            ));
        }
        Ok(s)
    }

    pub fn num_x(&self) -> usize {
        self.num_x
    }
    pub fn u_param(&self) -> u64 {
        self.u_param
    }
    pub fn gap(&self) -> i64 {
        self.gap
    }
    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }
    pub fn len(&self) -> usize {
        self.inequalities.len()
    }
    pub fn is_empty(&self) -> bool {
        self.inequalities.is_empty()
    }

    pub fn group_count(&self, g: Group) -> usize {
        self.inequalities.iter().filter(|q| q.group == g).count()
    }
}

/// The value of δ in an assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Delta {
    Exact(Rational),
    /// A positive infinitesimal ε.
    Infinitesimal,
}

impl Serialize for Delta {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Delta::Exact(r) => s.serialize_str(&format_rational(r)),
            Delta::Infinitesimal => s.serialize_str("eps"),
        }
    }
}

impl<'de> Deserialize<'de> for Delta {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        if raw == "eps" {
            return Ok(Delta::Infinitesimal);
        }
        parse_rational(&raw)
            .map(Delta::Exact)
            .ok_or_else(|| serde::de::Error::custom(format!("invalid delta {raw:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LhpAssignment {
    #[serde(with = "rational_vec")]
    pub x_values: Vec<Rational>,
    #[serde(with = "rational_str")]
    pub y_value: Rational,
    pub delta_value: Delta,
}

impl LhpAssignment {
    pub fn new(x_values: Vec<Rational>, y_value: Rational, delta_value: Delta) -> Self {
        Self {
            x_values,
            y_value,
            delta_value,
        }
    }

    /// Whether δ is a strictly positive quantity.
    pub fn delta_is_positive(&self) -> bool {
        match &self.delta_value {
            Delta::Exact(d) => d.is_positive(),
            Delta::Infinitesimal => true,
        }
    }
}
