use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::coeff::Coeff;
use super::word::{ball, sphere, Word};
use crate::error::{precondition, Result};

/// Left operands are split into chunks of this many terms for parallel
/// convolution; fixed so that floating sums do not depend on thread count.
const CHUNK: usize = 32;

/// Finitely supported element `Σ x(g) λ(g)` of the group algebra of `F_n`.
///
/// No zero coefficient is ever stored.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupPolynomial<C: Coeff = Complex64> {
    rank: usize,
    coeffs: BTreeMap<Word, C>,
}

impl<C: Coeff> GroupPolynomial<C> {
    pub fn zero(rank: usize) -> Self {
        GroupPolynomial {
            rank,
            coeffs: BTreeMap::new(),
        }
    }

    /// `c·λ(g)`.
    pub fn monomial(rank: usize, word: Word, c: C) -> Result<Self> {
        Self::from_terms(rank, [(word, c)])
    }

    /// `λ(e)`.
    pub fn unit(rank: usize) -> Self {
        let mut p = Self::zero(rank);
        p.add_term(Word::identity(), C::one());
        p
    }

    /// Sums the given terms; repeated words accumulate.
    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (Word, C)>) -> Result<Self> {
        let mut p = Self::zero(rank);
        for (w, c) in terms {
            if w.max_generator() > rank {
                return Err(precondition(format!("word {w} uses a generator beyond rank {rank}")));
            }
            p.add_term(w, c);
        }
        Ok(p)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Support size.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, w: &Word) -> C {
        self.coeffs.get(w).cloned().unwrap_or_else(C::zero)
    }

    /// Terms in word order.
    pub fn iter(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.coeffs.iter()
    }

    /// Length of the longest word in the support.
    pub fn max_length(&self) -> usize {
        self.coeffs.keys().map(Word::len).max().unwrap_or(0)
    }

    fn add_term(&mut self, w: Word, c: C) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(precondition(format!(
                "rank mismatch: F_{} against F_{}",
                self.rank, other.rank
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_rank(other)?;
        let mut out = self.clone();
        for (w, c) in &other.coeffs {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Self::zero(self.rank);
        for (w, c) in &self.coeffs {
            out.add_term(w.clone(), s.clone() * c.clone());
        }
        out
    }

    /// Convolution `(xy)(g) = Σ_{hk = g} x(h) y(k)`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.same_rank(other)?;
        let left: Vec<(&Word, &C)> = self.coeffs.iter().collect();
        let partials: Vec<BTreeMap<Word, C>> = left
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut acc: BTreeMap<Word, C> = BTreeMap::new();
                for (h, a) in chunk {
                    for (k, b) in &other.coeffs {
                        let v = (*a).clone() * b.clone();
                        *acc.entry(h.mul(k)).or_insert_with(C::zero) += v;
                    }
                }
                acc
            })
            .collect();
        let mut out = Self::zero(self.rank);
        for part in partials {
            for (w, c) in part {
                out.add_term(w, c);
            }
        }
        out.trim();
        Ok(out)
    }

    /// Drops floating-point cancellation residue; exact rings are untouched.
    fn trim(&mut self) {
        let max_abs = self.coeffs.values().map(|c| c.to_complex().norm()).fold(0.0, f64::max);
        self.coeffs.retain(|_, c| !c.negligible(max_abs));
    }

    /// `x*(g) = conj(x(g⁻¹))`.
    pub fn adjoint(&self) -> Self {
        GroupPolynomial {
            rank: self.rank,
            coeffs: self.coeffs.iter().map(|(w, c)| (w.inverse(), c.conj())).collect(),
        }
    }

    /// `τ(x) = x(e)`.
    pub fn canonical_trace(&self) -> C {
        self.get(&Word::identity())
    }

    /// `τ(xy) = Σ_g x(g) y(g⁻¹)`, without forming the product.
    pub fn trace_pairing(&self, other: &Self) -> Result<C> {
        self.same_rank(other)?;
        let mut acc = C::zero();
        for (w, c) in &self.coeffs {
            if let Some(d) = other.coeffs.get(&w.inverse()) {
                acc += c.clone() * d.clone();
            }
        }
        Ok(acc)
    }

    /// `Σ |x(g)|² = τ(x*x)`.
    pub fn l2_norm_sq(&self) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.values() {
            acc += c.abs_sq();
        }
        acc
    }

    /// Restriction to words of length exactly `k`.
    pub fn homogeneous_component(&self, k: usize) -> Self {
        GroupPolynomial {
            rank: self.rank,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(w, _)| w.len() == k)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Non-zero homogeneous components keyed by degree.
    pub fn components(&self) -> BTreeMap<usize, Self> {
        let mut out: BTreeMap<usize, Self> = BTreeMap::new();
        for (w, c) in &self.coeffs {
            out.entry(w.len())
                .or_insert_with(|| Self::zero(self.rank))
                .coeffs
                .insert(w.clone(), c.clone());
        }
        out
    }

    /// `Some(k)` iff the polynomial is non-zero and supported on `S_k`.
    pub fn degree(&self) -> Option<usize> {
        let mut lens = self.coeffs.keys().map(Word::len);
        let k = lens.next()?;
        lens.all(|l| l == k).then_some(k)
    }

    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> GroupPolynomial<D> {
        let mut out = GroupPolynomial::zero(self.rank);
        for (w, c) in &self.coeffs {
            out.add_term(w.clone(), f(c));
        }
        out
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

impl GroupPolynomial<Complex64> {
    /// `(P_t x)(g) = e^{−t|g|} x(g)`.
    pub fn poisson_apply(&self, t: f64) -> Result<Self> {
        if !(t >= 0.0) {
            return Err(precondition(format!("semigroup time must be nonnegative, got {t}")));
        }
        Ok(GroupPolynomial {
            rank: self.rank,
            coeffs: self
                .coeffs
                .iter()
                .map(|(w, c)| (w.clone(), c * (-t * w.len() as f64).exp()))
                .collect(),
        })
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `Σ_{g ∈ S_k} λ(g)`.
    pub fn sphere_sum(rank: usize, k: usize) -> Self {
        GroupPolynomial {
            rank,
            coeffs: sphere(rank, k).into_iter().map(|w| (w, Complex64::new(1.0, 0.0))).collect(),
        }
    }

    /// Standard complex Gaussian coefficients on a random subset of `S_k`
    /// (each word kept with probability `density`, at least one word).
    pub fn random_homogeneous<R: Rng + ?Sized>(rank: usize, k: usize, density: f64, rng: &mut R) -> Self {
        let words = sphere(rank, k);
        let forced = rng.random_range(0..words.len());
        let mut coeffs = BTreeMap::new();
        for (i, w) in words.into_iter().enumerate() {
            if i == forced || rng.random_bool(density) {
                coeffs.insert(w, complex_gaussian(rng));
            }
        }
        GroupPolynomial { rank, coeffs }
    }

    /// Standard complex Gaussian coefficients on every word of length at
    /// most `radius`.
    pub fn random_on_ball<R: Rng + ?Sized>(rank: usize, radius: usize, rng: &mut R) -> Self {
        GroupPolynomial {
            rank,
            coeffs: ball(rank, radius).into_iter().map(|w| (w, complex_gaussian(rng))).collect(),
        }
    }
}
