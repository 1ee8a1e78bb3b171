//! matroids on small ground sets, given by their lists of bases. the ground
//! set is {1,...,n} with n <= 16; every subset is a bitmask and every
//! operation is a direct enumeration, which at this scale beats anything
//! clever and is easy to trust.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::mask::{
    bit, card, contains, elems, fmt_mask, full_mask, is_subset, lex_cmp, mask_of, submasks, Mask,
    MAX_GROUND,
};
use crate::rat::Rat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatroidError {
    #[error("ground set size {0} exceeds the supported maximum {MAX_GROUND}")]
    GroundSetTooLarge(usize),
    #[error("rank {d} exceeds ground set size {n}")]
    RankTooLarge { d: usize, n: usize },
    #[error("basis list is empty")]
    EmptyBases,
    #[error("element {elem} out of range 1..={n}")]
    ElementOutOfRange { elem: usize, n: usize },
    #[error("basis {basis} does not have cardinality {d}")]
    WrongCardinality { basis: String, d: usize },
    #[error("exchange axiom fails for {b1}, {b2} at element {x}")]
    ExchangeAxiomViolation { b1: String, b2: String, x: usize },
    #[error("{set} is not a basis")]
    NotABasis { set: String },
    #[error("element {0} already lies in the basis")]
    ElementInBasis(usize),
    #[error("matroid has a loop at element {0}")]
    HasLoop(usize),
    #[error("weight vector has length {got}, ground set has size {expected}")]
    WeightLength { got: usize, expected: usize },
}

/// rational weight on the ground set, one entry per element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weight(pub Vec<Rat>);

impl Weight {
    pub fn from_i64(w: &[i64]) -> Self {
        Weight(w.iter().map(|&v| crate::rat::rat_i(v)).collect())
    }

    pub fn zero(n: usize) -> Self {
        Weight(vec![crate::rat::rat_zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// whether the coordinates sum to zero (the balanced slice all tropical
    /// arguments live on).
    pub fn sum_is_zero(&self) -> bool {
        self.0.iter().sum::<Rat>().is_zero()
    }

    /// sum of the weights of the elements in `s`.
    pub fn mask_weight(&self, s: Mask) -> Rat {
        elems(s).iter().map(|&i| self.0[i - 1].clone()).sum()
    }

    /// exact pairing with an exponent vector of the same length.
    pub fn dot_exp(&self, exp: &[i64]) -> Rat {
        assert_eq!(exp.len(), self.0.len());
        self.0
            .iter()
            .zip(exp)
            .map(|(w, &e)| w * crate::rat::rat_i(e))
            .sum()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(crate::rat::fmt_rat).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// characteristic polynomial with integer coefficients; `coeffs[k]` is the
/// coefficient of t^k. identically zero exactly when the matroid has a loop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharPoly {
    pub coeffs: Vec<i64>,
}

impl CharPoly {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn eval(&self, t: i64) -> i128 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c as i128 * (t as i128).pow(k as u32))
            .sum()
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if first {
                if c < 0 { "-" } else { "" }
            } else if c < 0 {
                " - "
            } else {
                " + "
            };
            let a = c.unsigned_abs();
            let body = match (k, a) {
                (0, a) => format!("{a}"),
                (1, 1) => "t".to_string(),
                (1, a) => format!("{a}t"),
                (k, 1) => format!("t^{k}"),
                (k, a) => format!("{a}t^{k}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    pub set: Mask,
    pub rank: usize,
}

/// the lattice of flats: all closed sets with rank labels, plus the covering
/// pairs (indices into `flats`).
#[derive(Clone, Debug)]
pub struct FlatLattice {
    pub flats: Vec<Flat>,
    pub covers: Vec<(usize, usize)>,
}

impl FlatLattice {
    /// proper nonempty flats, the vertex set of the order complex.
    pub fn proper_nonempty(&self, ground: Mask) -> Vec<Flat> {
        self.flats
            .iter()
            .filter(|f| f.set != 0 && f.set != ground)
            .cloned()
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct ParallelClasses {
    /// blocks of mutually parallel elements, ordered by smallest member.
    pub classes: Vec<Mask>,
    /// gcd of the block sizes; 1 certifies the irreducibility criterion.
    pub gcd: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matroid {
    n: usize,
    d: usize,
    bases: BTreeSet<Mask>,
}

impl Matroid {
    /// builds a matroid from 1-based basis lists, rejecting anything that
    /// fails the exchange axiom.
    pub fn from_bases(n: usize, d: usize, bases: &[Vec<usize>]) -> Result<Self, MatroidError> {
        if n > MAX_GROUND {
            return Err(MatroidError::GroundSetTooLarge(n));
        }
        for b in bases {
            for &e in b {
                if e < 1 || e > n {
                    return Err(MatroidError::ElementOutOfRange { elem: e, n });
                }
            }
        }
        Self::from_masks(n, d, bases.iter().map(|b| mask_of(b)))
    }

    pub fn from_masks(
        n: usize,
        d: usize,
        masks: impl IntoIterator<Item = Mask>,
    ) -> Result<Self, MatroidError> {
        if n > MAX_GROUND {
            return Err(MatroidError::GroundSetTooLarge(n));
        }
        if d > n {
            return Err(MatroidError::RankTooLarge { d, n });
        }
        let bases: BTreeSet<Mask> = masks.into_iter().collect();
        if bases.is_empty() {
            return Err(MatroidError::EmptyBases);
        }
        let ground = full_mask(n);
        for &b in &bases {
            if b & !ground != 0 {
                let elem = elems(b & !ground)[0];
                return Err(MatroidError::ElementOutOfRange { elem, n });
            }
            if card(b) != d {
                return Err(MatroidError::WrongCardinality { basis: fmt_mask(b), d });
            }
        }
        // basis exchange, checked pairwise by brute force
        for &b1 in &bases {
            for &b2 in &bases {
                for x in elems(b1 & !b2) {
                    let stripped = b1 & !bit(x);
                    let ok = elems(b2 & !b1).iter().any(|&y| bases.contains(&(stripped | bit(y))));
                    if !ok {
                        return Err(MatroidError::ExchangeAxiomViolation {
                            b1: fmt_mask(b1),
                            b2: fmt_mask(b2),
                            x,
                        });
                    }
                }
            }
        }
        Ok(Matroid { n, d, bases })
    }

    /// uniform matroid U_{d,n}: every d-subset is a basis.
    pub fn uniform(d: usize, n: usize) -> Self {
        let bases = submasks(full_mask(n)).filter(|&s| card(s) == d);
        Self::from_masks(n, d, bases).expect("uniform matroids are matroids")
    }

    fn from_trusted_masks(n: usize, d: usize, bases: BTreeSet<Mask>) -> Self {
        debug_assert!(!bases.is_empty());
        Matroid { n, d, bases }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ground(&self) -> Mask {
        full_mask(self.n)
    }

    pub fn bases(&self) -> impl Iterator<Item = Mask> + '_ {
        self.bases.iter().copied()
    }

    pub fn num_bases(&self) -> usize {
        self.bases.len()
    }

    pub fn is_basis(&self, s: Mask) -> bool {
        self.bases.contains(&s)
    }

    /// basis that is least as a sorted element list.
    pub fn lex_min_basis(&self) -> Mask {
        self.bases().min_by(|&a, &b| lex_cmp(a, b)).expect("bases are nonempty")
    }

    pub fn rank_of(&self, s: Mask) -> usize {
        self.bases().map(|b| card(b & s)).max().expect("bases are nonempty")
    }

    pub fn is_independent(&self, s: Mask) -> bool {
        self.rank_of(s) == card(s)
    }

    /// elements contained in no basis.
    pub fn loops(&self) -> Mask {
        let covered = self.bases().fold(0, |acc, b| acc | b);
        self.ground() & !covered
    }

    pub fn is_loop_free(&self) -> bool {
        self.loops() == 0
    }

    fn require_loop_free(&self) -> Result<(), MatroidError> {
        let l = self.loops();
        if l != 0 {
            return Err(MatroidError::HasLoop(elems(l)[0]));
        }
        Ok(())
    }

    /// inclusion-minimal dependent sets, ordered by (size, elements).
    pub fn circuits(&self) -> Vec<Mask> {
        let mut by_size: Vec<Mask> = submasks(self.ground())
            .filter(|&s| s != 0 && self.rank_of(s) < card(s))
            .collect();
        by_size.sort_by(|&a, &b| card(a).cmp(&card(b)).then(lex_cmp(a, b)));
        let mut out: Vec<Mask> = Vec::new();
        for s in by_size {
            if !out.iter().any(|&c| is_subset(c, s)) {
                out.push(s);
            }
        }
        out
    }

    pub fn is_circuit(&self, c: Mask) -> bool {
        c != 0
            && self.rank_of(c) == card(c) - 1
            && elems(c).iter().all(|&i| self.is_independent(c & !bit(i)))
    }

    /// the unique circuit inside basis + {i}: {i} together with the basis
    /// elements j whose exchange basis - j + i is again a basis.
    pub fn fundamental_circuit(&self, i: usize, basis: Mask) -> Result<Mask, MatroidError> {
        if i < 1 || i > self.n {
            return Err(MatroidError::ElementOutOfRange { elem: i, n: self.n });
        }
        if !self.is_basis(basis) {
            return Err(MatroidError::NotABasis { set: fmt_mask(basis) });
        }
        if contains(basis, i) {
            return Err(MatroidError::ElementInBasis(i));
        }
        let mut c = bit(i);
        for j in elems(basis) {
            if self.is_basis((basis & !bit(j)) | bit(i)) {
                c |= bit(j);
            }
        }
        Ok(c)
    }

    fn check_weight(&self, w: &Weight) -> Result<(), MatroidError> {
        if w.len() != self.n {
            return Err(MatroidError::WeightLength { got: w.len(), expected: self.n });
        }
        Ok(())
    }

    /// the matroid whose bases are the bases of maximal total weight.
    pub fn weight_matroid(&self, w: &Weight) -> Result<Matroid, MatroidError> {
        self.check_weight(w)?;
        let best = self
            .bases()
            .map(|b| w.mask_weight(b))
            .max()
            .expect("bases are nonempty");
        let keep: BTreeSet<Mask> = self.bases().filter(|&b| w.mask_weight(b) == best).collect();
        Ok(Matroid::from_trusted_masks(self.n, self.d, keep))
    }

    /// greedy maximum-weight basis; ties go to the smaller element, so the
    /// result is deterministic and, for constant weights, lexicographically
    /// least.
    pub fn greedy_basis(&self, w: &Weight) -> Result<Mask, MatroidError> {
        self.check_weight(w)?;
        let mut order: Vec<usize> = (1..=self.n).collect();
        order.sort_by(|&a, &b| w.0[b - 1].cmp(&w.0[a - 1]).then(a.cmp(&b)));
        let mut s: Mask = 0;
        for i in order {
            if self.is_independent(s | bit(i)) {
                s |= bit(i);
            }
        }
        assert_eq!(card(s), self.d, "greedy must reach full rank");
        Ok(s)
    }

    /// tropical membership: the weight matroid has no loop.
    pub fn in_bergman(&self, w: &Weight) -> Result<bool, MatroidError> {
        Ok(self.weight_matroid(w)?.is_loop_free())
    }

    /// Whitney rank alternating sum. loops make everything cancel to the
    /// zero polynomial, which callers report rather than reject.
    pub fn characteristic_polynomial(&self) -> CharPoly {
        let mut coeffs = vec![0i64; self.d + 1];
        for s in submasks(self.ground()) {
            let sign = if card(s).is_multiple_of(2) { 1 } else { -1 };
            coeffs[self.d - self.rank_of(s)] += sign;
        }
        CharPoly { coeffs }
    }

    /// absolute value of the characteristic polynomial at zero.
    pub fn mobius_number(&self) -> u64 {
        self.characteristic_polynomial().coeffs[0].unsigned_abs()
    }

    /// partition into parallel classes (i ~ j when {i,j} is dependent) and
    /// the gcd of the class sizes. requires a loop-free matroid.
    pub fn parallel_classes(&self) -> Result<ParallelClasses, MatroidError> {
        self.require_loop_free()?;
        let mut seen: Mask = 0;
        let mut classes = Vec::new();
        for i in 1..=self.n {
            if contains(seen, i) {
                continue;
            }
            let class = (i..=self.n)
                .filter(|&j| self.rank_of(bit(i) | bit(j)) == 1)
                .fold(0, |m, j| m | bit(j));
            seen |= class;
            classes.push(class);
        }
        let gcd = classes.iter().fold(0usize, |g, &c| g.gcd(&card(c)));
        Ok(ParallelClasses { classes, gcd })
    }

    /// all flats with ranks and covering relations. flats are sorted by
    /// (rank, elements), so index 0 is the closure of the empty set and the
    /// last flat is the whole ground set.
    pub fn flats(&self) -> FlatLattice {
        let mut flats: Vec<Flat> = submasks(self.ground())
            .filter(|&s| {
                let r = self.rank_of(s);
                elems(self.ground() & !s).iter().all(|&i| self.rank_of(s | bit(i)) > r)
            })
            .map(|s| Flat { set: s, rank: self.rank_of(s) })
            .collect();
        flats.sort_by(|a, b| a.rank.cmp(&b.rank).then(lex_cmp(a.set, b.set)));
        let mut covers = Vec::new();
        for (lo, f) in flats.iter().enumerate() {
            for (hi, g) in flats.iter().enumerate() {
                // strict containment with rank step one is exactly a cover
                // in a matroid's flat lattice
                if f.set != g.set && f.set & g.set == f.set && g.rank == f.rank + 1 {
                    covers.push((lo, hi));
                }
            }
        }
        FlatLattice { flats, covers }
    }
}

impl fmt::Display for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut sorted: Vec<Mask> = self.bases().collect();
        sorted.sort_by(|&a, &b| lex_cmp(a, b));
        let rendered: Vec<String> = sorted.into_iter().map(fmt_mask).collect();
        write!(f, "matroid(n={}, d={}, bases=[{}])", self.n, self.d, rendered.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct MatroidJson {
    n: usize,
    d: usize,
    bases: Vec<Vec<usize>>,
}

impl Serialize for Matroid {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut sorted: Vec<Mask> = self.bases().collect();
        sorted.sort_by(|&a, &b| lex_cmp(a, b));
        MatroidJson {
            n: self.n,
            d: self.d,
            bases: sorted.into_iter().map(elems).collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Matroid {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = MatroidJson::deserialize(de)?;
        Matroid::from_bases(raw.n, raw.d, &raw.bases).map_err(D::Error::custom)
    }
}
