//! Perturbative corrections to the Gaussian central probability.
//!
//! Expanding `exp(sum_k i^k f~_k V~_k k^k / (k! (beta m)^{(k-2)/2}))` and
//! taking Gaussian expectation values term by term gives the multiplicative
//! correction `1 + K1/(beta m) + K2/m + K3/(beta m)^2 + ...`. Each term is a
//! product of vertex tensors whose indices are contracted pairwise with the
//! propagator in every possible way (Wick's theorem).

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::problem_model::ProblemSpec;
use crate::series_calculus::{
    count_vectors, factorial, multinomial, propagator, rescaled_vertex_correction,
    vertex_tensor, CalculusError, PropagatorMatrix, Rational, SymTensor,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("Gaussian moment of an odd number ({0}) of variables")]
    OddIndexCount(usize),
    #[error("unsupported expansion order {0}; orders 1 and 2 are available")]
    UnsupportedOrder(usize),
    #[error("term with imaginary coefficient reached storage: degrees {0:?}")]
    ImaginaryTerm(Vec<usize>),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}

/// One product of vertices from the expanded exponential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramTerm {
    /// Vertex degrees, sorted ascending.
    pub vertex_degrees: Vec<usize>,
    /// Real coefficient: `i`-power sign, `1/k!` per vertex, `1/n!` per repeated vertex.
    pub coefficient: Rational,
    /// Power of `(beta m)^{-1/2}` carried: `sum (degree - 2)`.
    pub half_order: usize,
}

impl DiagramTerm {
    pub fn index_count(&self) -> usize {
        self.vertex_degrees.iter().sum()
    }
}

/// Exact correction coefficients of `1 + K1/(beta m) + K2/m + K3/(beta m)^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrectionCoefficients {
    pub d: usize,
    pub k1: Rational,
    pub k2: Rational,
    pub k3: Rational,
}

/// All multisets of vertex degrees (each at least 3) with `sum (deg - 2) = half_order`.
fn degree_multisets(half_order: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, max_part: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            let mut degrees: Vec<usize> = cur.iter().map(|p| p + 2).collect();
            degrees.sort_unstable();
            out.push(degrees);
            return;
        }
        for part in (1..=left.min(max_part)).rev() {
            cur.push(part);
            rec(left - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(half_order, half_order, &mut Vec::new(), &mut out);
    out
}

/// Terms of the expansion at `(beta m)^{-order}`.
pub fn generate_terms(order: usize) -> Result<Vec<DiagramTerm>, DiagramError> {
    if !(1..=2).contains(&order) {
        return Err(DiagramError::UnsupportedOrder(order));
    }
    let mut terms = Vec::new();
    for degrees in degree_multisets(2 * order) {
        let total: usize = degrees.iter().sum();
        // i^total must be real; odd totals carry a vanishing Gaussian moment anyway.
        if total % 2 == 1 {
            return Err(DiagramError::ImaginaryTerm(degrees));
        }
        let sign = if (total / 2) % 2 == 0 { Rational::one() } else { -Rational::one() };
        let mut coefficient = sign;
        let mut multiplicities: BTreeMap<usize, u64> = BTreeMap::new();
        for &k in &degrees {
            coefficient /= Rational::from_integer(factorial(k as u64));
            *multiplicities.entry(k).or_default() += 1;
        }
        for &n in multiplicities.values() {
            coefficient /= Rational::from_integer(factorial(n));
        }
        terms.push(DiagramTerm { vertex_degrees: degrees, coefficient, half_order: 2 * order });
    }
    terms.sort_by(|a, b| b.vertex_degrees.len().cmp(&a.vertex_degrees.len()).then(a.vertex_degrees.cmp(&b.vertex_degrees)));
    Ok(terms)
}

/// Calls `f` once for every perfect pairing of `0..n`.
pub fn for_each_pairing(n: usize, mut f: impl FnMut(&[(usize, usize)])) {
    fn rec(free: &mut Vec<usize>, pairs: &mut Vec<(usize, usize)>, f: &mut dyn FnMut(&[(usize, usize)])) {
        if free.is_empty() {
            f(pairs);
            return;
        }
        let first = free.remove(0);
        for k in 0..free.len() {
            let partner = free.remove(k);
            pairs.push((first, partner));
            rec(free, pairs, f);
            pairs.pop();
            free.insert(k, partner);
        }
        free.insert(0, first);
    }
    if n % 2 == 1 {
        return;
    }
    let mut free: Vec<usize> = (0..n).collect();
    rec(&mut free, &mut Vec::with_capacity(n / 2), &mut f);
}

pub fn pairing_count(n: usize) -> u64 {
    let mut count = 0;
    for_each_pairing(n, |_| count += 1);
    count
}

/// `<k_{a1} ... k_{an}>` as the sum over all pairings of products of propagators.
pub fn wick_moment(indices: &[usize], prop: &PropagatorMatrix) -> Result<Rational, DiagramError> {
    if indices.len() % 2 == 1 {
        return Err(DiagramError::OddIndexCount(indices.len()));
    }
    let mut total = Rational::zero();
    for_each_pairing(indices.len(), |pairs| {
        let mut p = Rational::one();
        for &(i, j) in pairs {
            p *= prop.get(indices[i], indices[j]);
        }
        total += p;
    });
    Ok(total)
}

/// Gaussian moments keyed by per-axis counts, by the Wick recursion
/// `<k_a k^n> = sum_b n_b Pi_ab <k^{n - e_b}>`.
pub struct MomentTable<'a> {
    prop: &'a PropagatorMatrix,
    cache: HashMap<Vec<usize>, Rational>,
}

impl<'a> MomentTable<'a> {
    pub fn new(prop: &'a PropagatorMatrix) -> Self {
        MomentTable { prop, cache: HashMap::new() }
    }

    pub fn moment(&mut self, counts: &[usize]) -> Rational {
        let total: usize = counts.iter().sum();
        if total % 2 == 1 {
            return Rational::zero();
        }
        if total == 0 {
            return Rational::one();
        }
        if let Some(v) = self.cache.get(counts) {
            return v.clone();
        }
        let a = counts.iter().position(|&n| n > 0).expect("nonzero total");
        let mut rest = counts.to_vec();
        rest[a] -= 1;
        let mut value = Rational::zero();
        for b in 0..rest.len() {
            if rest[b] == 0 {
                continue;
            }
            let mult = rest[b];
            let mut sub = rest.clone();
            sub[b] -= 1;
            let m = self.moment(&sub);
            value += self.prop.get(a, b) * m * Rational::from_integer(mult.into());
        }
        self.cache.insert(counts.to_vec(), value.clone());
        value
    }
}

fn vertices_for(term: &DiagramTerm, d: usize) -> Result<Vec<SymTensor>, DiagramError> {
    term.vertex_degrees.iter().map(|&k| vertex_tensor(d, k).map_err(DiagramError::from)).collect()
}

/// Full Wick contraction of a term: `coefficient * <prod_v V_v k...k>`.
///
/// Index tuples are grouped by their per-vertex count vectors, so the work is
/// a convolution over multisets rather than a loop over `d^(indices)` tuples.
pub fn contract(term: &DiagramTerm, d: usize) -> Result<Rational, DiagramError> {
    let prop = propagator(d)?;
    let vertices = vertices_for(term, d)?;
    if term.index_count() % 2 == 1 {
        return Ok(Rational::zero());
    }
    let mut totals: HashMap<Vec<usize>, Rational> = HashMap::new();
    totals.insert(vec![0; d], Rational::one());
    for (vertex, &k) in vertices.iter().zip(&term.vertex_degrees) {
        let choices: Vec<(Vec<usize>, Rational)> = count_vectors(d, k)
            .into_iter()
            .map(|c| {
                let w = multinomial(&c) * vertex.get_counts(&c);
                (c, w)
            })
            .filter(|(_, w)| !w.is_zero())
            .collect();
        let mut next: HashMap<Vec<usize>, Rational> = HashMap::new();
        for (acc, weight) in &totals {
            for (c, w) in &choices {
                let key: Vec<usize> = acc.iter().zip(c).map(|(x, y)| x + y).collect();
                *next.entry(key).or_insert_with(Rational::zero) += weight * w;
            }
        }
        totals = next;
    }
    let mut moments = MomentTable::new(&prop);
    let mut sum = Rational::zero();
    for (counts, weight) in &totals {
        sum += weight * moments.moment(counts);
    }
    Ok(&term.coefficient * sum)
}

/// Same contraction by explicit loops over every index tuple, with each
/// Gaussian moment from explicit pairing enumeration. Cost grows as
/// `d^(indices)`; intended as a cross-check.
pub fn contract_raw(term: &DiagramTerm, d: usize) -> Result<Rational, DiagramError> {
    let prop = propagator(d)?;
    let vertices = vertices_for(term, d)?;
    let slots = term.index_count();
    if slots % 2 == 1 {
        return Ok(Rational::zero());
    }
    let mut moment_cache: HashMap<Vec<usize>, Rational> = HashMap::new();
    let mut tuple = vec![0usize; slots];
    let mut sum = Rational::zero();
    loop {
        let mut product = Rational::one();
        let mut offset = 0;
        for (vertex, &k) in vertices.iter().zip(&term.vertex_degrees) {
            product *= vertex.get(&tuple[offset..offset + k]);
            offset += k;
        }
        if !product.is_zero() {
            let mut key = tuple.clone();
            key.sort_unstable();
            let moment = match moment_cache.get(&key) {
                Some(m) => m.clone(),
                None => {
                    let m = wick_moment(&key, &prop)?;
                    moment_cache.insert(key, m.clone());
                    m
                }
            };
            sum += product * moment;
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == slots {
                return Ok(&term.coefficient * sum);
            }
            tuple[pos] += 1;
            if tuple[pos] < d {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
    }
}

/// Pairings of a term grouped by the vertex multigraph they produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopologyClass {
    /// Upper-triangular edge counts between vertices (diagonal = self-loops).
    pub edges: Vec<Vec<usize>>,
    pub pairings: u64,
    /// Index sum for a single pairing of this shape, without the term coefficient.
    pub value: Rational,
}

fn canonical_edges(adj: &[Vec<usize>], degrees: &[usize]) -> Vec<Vec<usize>> {
    let n = degrees.len();
    let mut best: Option<Vec<Vec<usize>>> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        if (0..n).any(|i| degrees[p[i]] != degrees[i]) {
            return;
        }
        let relabeled: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).map(|j| if j < i { 0 } else { adj[p[i].min(p[j])][p[i].max(p[j])] }).collect())
            .collect();
        if best.as_ref().is_none_or(|b| relabeled < *b) {
            best = Some(relabeled);
        }
    });
    best.expect("identity permutation always qualifies")
}

fn permute(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

/// Groups the pairings of `term` by topology and evaluates one pairing of each.
pub fn topology_classes(term: &DiagramTerm, d: usize) -> Result<Vec<TopologyClass>, DiagramError> {
    let prop = propagator(d)?;
    let vertices = vertices_for(term, d)?;
    let degrees = &term.vertex_degrees;
    let n = degrees.len();
    let slot_owner: Vec<usize> = degrees.iter().enumerate().flat_map(|(v, &k)| std::iter::repeat(v).take(k)).collect();
    let mut classes: BTreeMap<Vec<Vec<usize>>, (u64, Vec<(usize, usize)>)> = BTreeMap::new();
    for_each_pairing(slot_owner.len(), |pairs| {
        let mut adj = vec![vec![0usize; n]; n];
        for &(i, j) in pairs {
            let (a, b) = (slot_owner[i].min(slot_owner[j]), slot_owner[i].max(slot_owner[j]));
            adj[a][b] += 1;
        }
        let key = canonical_edges(&adj, degrees);
        let entry = classes.entry(key).or_insert_with(|| (0, pairs.to_vec()));
        entry.0 += 1;
    });
    let slots = slot_owner.len();
    let mut out = Vec::new();
    for (edges, (count, pairs)) in classes {
        let mut tuple = vec![0usize; slots];
        let mut value = Rational::zero();
        'outer: loop {
            let mut product = Rational::one();
            for &(i, j) in &pairs {
                product *= prop.get(tuple[i], tuple[j]);
            }
            if !product.is_zero() {
                let mut offset = 0;
                for (vertex, &k) in vertices.iter().zip(degrees) {
                    product *= vertex.get(&tuple[offset..offset + k]);
                    offset += k;
                }
                value += product;
            }
            let mut pos = 0;
            loop {
                if pos == slots {
                    break 'outer;
                }
                tuple[pos] += 1;
                if tuple[pos] < d {
                    break;
                }
                tuple[pos] = 0;
                pos += 1;
            }
        }
        out.push(TopologyClass { edges, pairings: count, value });
    }
    Ok(out)
}

pub fn compute_k1(d: usize) -> Result<Rational, DiagramError> {
    generate_terms(1)?.iter().try_fold(Rational::zero(), |acc, t| Ok(acc + contract(t, d)?))
}

/// Linear-in-`beta` coefficient of `prod_v f~_{deg v}(beta)` for a term.
pub fn vertex_correction_slope(term: &DiagramTerm) -> Result<Rational, DiagramError> {
    let mut slope = Rational::zero();
    for &k in &term.vertex_degrees {
        // constant terms are 1, so the product's slope is the sum of slopes
        slope += rescaled_vertex_correction(k, 1)?.coeff(1);
    }
    Ok(slope)
}

/// `(slope factor, contraction)` for each first-order term.
pub fn k2_contributions(d: usize) -> Result<Vec<(DiagramTerm, Rational, Rational)>, DiagramError> {
    generate_terms(1)?
        .into_iter()
        .map(|t| {
            let factor = vertex_correction_slope(&t)?;
            let value = contract(&t, d)?;
            Ok((t, factor, value))
        })
        .collect()
}

pub fn compute_k2(d: usize) -> Result<Rational, DiagramError> {
    Ok(k2_contributions(d)?.into_iter().fold(Rational::zero(), |acc, (_, f, v)| acc + f * v))
}

/// Per-term contributions at second order in `1/(beta m)`.
pub fn k3_terms(d: usize) -> Result<Vec<(DiagramTerm, Rational)>, DiagramError> {
    generate_terms(2)?
        .into_iter()
        .map(|t| {
            let v = contract(&t, d)?;
            Ok((t, v))
        })
        .collect()
}

pub fn compute_k3(d: usize) -> Result<Rational, DiagramError> {
    Ok(k3_terms(d)?.into_iter().fold(Rational::zero(), |acc, (_, v)| acc + v))
}

pub fn correction_coefficients(d: usize) -> Result<CorrectionCoefficients, DiagramError> {
    Ok(CorrectionCoefficients { d, k1: compute_k1(d)?, k2: compute_k2(d)?, k3: compute_k3(d)? })
}

/// The multiplicative correction as a dense list of `(power of 1/N, coefficient)`.
///
/// With `beta m = N` and `m = N^alpha`, `K1` lands on `1/N`, `K3` on `1/N^2`
/// and `K2` on `1/N^alpha`; powers above `order` are dropped.
pub fn correction_polynomial(spec: &ProblemSpec, order: usize) -> Result<Vec<(u32, Rational)>, DiagramError> {
    if order > 2 {
        return Err(DiagramError::UnsupportedOrder(order));
    }
    let d = spec.dimension();
    let mut coeffs = vec![Rational::zero(); order + 1];
    coeffs[0] = Rational::one();
    if order >= 1 {
        coeffs[1] += compute_k1(d)?;
    }
    if order >= 2 {
        coeffs[2] += compute_k3(d)?;
        let alpha = spec.alpha as usize;
        if alpha <= order {
            coeffs[alpha] += compute_k2(d)?;
        }
    }
    Ok(coeffs.into_iter().enumerate().map(|(p, c)| (p as u32, c)).collect())
}
