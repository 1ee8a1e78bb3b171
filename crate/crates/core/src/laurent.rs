//! Laurent polynomials with exact rational coefficients: sparse term maps
//! keyed by integer exponent vectors. the variable count is fixed per
//! polynomial; mixing widths is a bug and panics.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::fp::{fold_exp, rat_mod};
use crate::matroid::Weight;
use crate::rat::{fmt_rat, rat_one, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("initial form of the zero polynomial is undefined")]
    ZeroPolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, Rat>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, rat_one())
    }

    /// the variable at 0-based position `pos`.
    pub fn var(nvars: usize, pos: usize) -> Self {
        let mut exp = vec![0i64; nvars];
        exp[pos] = 1;
        Self::monomial(exp, rat_one())
    }

    pub fn monomial(exp: Vec<i64>, coef: Rat) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, coef);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rat)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.terms.keys()
    }

    fn add_term(&mut self, exp: Vec<i64>, coef: Rat) {
        assert_eq!(exp.len(), self.nvars, "exponent width mismatch");
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coef;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// multiplication by the single monomial x^u.
    pub fn shifted(&self, u: &[i64]) -> Self {
        assert_eq!(u.len(), self.nvars);
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.iter().zip(u).map(|(x, y)| x + y).collect(), a.clone()))
                .collect(),
        }
    }

    /// sub-sum of the terms whose exponent pairs minimally with w.
    pub fn initial_form(&self, w: &Weight) -> Result<LaurentPoly, LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::ZeroPolynomial);
        }
        assert_eq!(w.len(), self.nvars, "weight width mismatch");
        let vals: Vec<(Vec<i64>, Rat)> = self
            .terms
            .keys()
            .map(|e| (e.clone(), w.dot_exp(e)))
            .collect();
        let min = vals.iter().map(|(_, v)| v).min().expect("nonzero poly").clone();
        let mut out = Self::zero(self.nvars);
        for (e, v) in vals {
            if v == min {
                out.add_term(e.clone(), self.terms[&e].clone());
            }
        }
        Ok(out)
    }

    pub fn is_homogeneous_of_degree(&self, deg: i64) -> bool {
        self.support().all(|e| e.iter().sum::<i64>() == deg)
    }

    /// bitmask of variable positions that occur with nonzero exponent.
    pub fn vars_used(&self) -> u32 {
        assert!(self.nvars <= 32);
        self.support().fold(0u32, |m, e| {
            e.iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .fold(m, |m, (i, _)| m | (1 << i))
        })
    }

    /// coefficients reduced mod p with exponents folded into [0, p-2];
    /// None when p divides a denominator. terms vanishing mod p are dropped.
    pub fn reduce_mod(&self, p: u64) -> Option<Vec<(Vec<u64>, u64)>> {
        self.terms
            .iter()
            .map(|(e, c)| {
                rat_mod(c, p).map(|cm| (e.iter().map(|&x| fold_exp(x, p)).collect(), cm))
            })
            .filter(|t| !matches!(t, Some((_, 0))))
            .collect()
    }

    /// rendering with custom variable names, for reports whose variables are
    /// not the standard x1..xn.
    pub fn fmt_with_names(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".to_string();
        }
        // render highest exponent vectors first, so "x1*x2*x3 - 1" instead
        // of "-1 + x1*x2*x3"
        let mut out = String::new();
        for (k, (exp, coef)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = exp
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
                .collect();
            let coef_abs = crate::rat::rat_abs(coef);
            let negative = coef < &crate::rat::rat_zero();
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let show_coef = mono.is_empty() || coef_abs != rat_one();
            if show_coef {
                out.push_str(&fmt_rat(&coef_abs));
                if !mono.is_empty() {
                    out.push('*');
                }
            }
            out.push_str(&mono.join("*"));
        }
        out
    }
}

/// evaluates reduced terms at a point of the torus (all coordinates nonzero).
pub fn eval_reduced(terms: &[(Vec<u64>, u64)], point: &[u64], p: u64) -> u64 {
    let mut acc = 0u64;
    for (exp, coef) in terms {
        let mut v = *coef;
        for (x, &e) in point.iter().zip(exp) {
            if e != 0 {
                v = v * crate::fp::mod_pow(*x, e, p) % p;
            }
        }
        acc = (acc + v) % p;
    }
    acc
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.fmt_with_names(&names))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = LaurentPoly::zero(self.nvars);
        for (e1, c1) in self.terms.iter() {
            for (e2, c2) in rhs.terms.iter() {
                let exp: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(exp, c1 * c2);
            }
        }
        out
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct TermJson<'a> {
            exp: &'a [i64],
            coef: String,
        }
        let mut seq = ser.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in self.terms.iter() {
            seq.serialize_element(&TermJson { exp: e, coef: fmt_rat(c) })?;
        }
        seq.end()
    }
}
