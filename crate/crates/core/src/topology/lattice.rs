//! Integral classes orthogonal to a Kähler class under a rational
//! intersection form.
//!
//! All arithmetic is exact: the form is rational, the kernel is computed by
//! unimodular column operations over the integers, and every `i64` step is
//! checked for overflow.

use std::collections::BTreeSet;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::Q;

/// Upper bound on the number of coefficient combinations visited when
/// enumerating candidates beyond the kernel basis.
pub const ENUMERATION_BUDGET: u64 = 250_000;

/// A symmetric rational form on `H²(B)` with labelled basis.
#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionLattice {
    form: Vec<Vec<Q>>,
    labels: Vec<String>,
}

impl IntersectionLattice {
    pub fn new(form: Vec<Vec<Q>>, labels: Vec<String>) -> Result<Self> {
        let m = form.len();
        if m == 0 || form.iter().any(|row| row.len() != m) {
            return Err(Error::DimensionMismatch(format!("intersection form must be square and nonempty, got {m} rows")));
        }
        for i in 0..m {
            for j in 0..i {
                if form[i][j] != form[j][i] {
                    return Err(Error::Parse(format!("intersection form is not symmetric at ({i}, {j})")));
                }
            }
        }
        let labels = if labels.is_empty() { (1..=m).map(|i| format!("x{i}")).collect() } else { labels };
        if labels.len() != m {
            return Err(Error::DimensionMismatch(format!("{} labels for rank {m}", labels.len())));
        }
        Ok(IntersectionLattice { form, labels })
    }

    pub fn diagonal(entries: &[Q], labels: Vec<String>) -> Result<Self> {
        let m = entries.len();
        let form = (0..m)
            .map(|i| (0..m).map(|j| if i == j { entries[i].clone() } else { Q::zero() }).collect())
            .collect();
        Self::new(form, labels)
    }

    pub fn rank(&self) -> usize {
        self.form.len()
    }

    pub fn form(&self) -> &[Vec<Q>] {
        &self.form
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Least common multiple of the denominators of the form.
    pub fn clearing_factor(&self) -> Result<i64> {
        let mut l = BigInt::one();
        for x in self.form.iter().flatten() {
            l = l.lcm(x.denom());
        }
        l.to_i64().ok_or(Error::Overflow)
    }

    /// `aᵀ Q b` in exact arithmetic.
    pub fn pairing(&self, a: &[i64], b: &[i64]) -> Result<Q> {
        let m = self.rank();
        if a.len() != m || b.len() != m {
            return Err(Error::DimensionMismatch(format!("vectors of length {} and {} against rank {m}", a.len(), b.len())));
        }
        let mut s = Q::zero();
        for i in 0..m {
            for j in 0..m {
                if !self.form[i][j].is_zero() {
                    s += &self.form[i][j] * Q::from_integer(BigInt::from(a[i]) * BigInt::from(b[j]));
                }
            }
        }
        Ok(s)
    }

    /// The rational covector `Qk`.
    pub fn apply(&self, k: &[i64]) -> Result<Vec<Q>> {
        if k.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!("vector of length {} against rank {}", k.len(), self.rank())));
        }
        Ok(self
            .form
            .iter()
            .map(|row| row.iter().zip(k).fold(Q::zero(), |s, (x, &ki)| s + x * Q::from_integer(ki.into())))
            .collect())
    }
}

/// An integral Kähler class `[ω]` in the lattice basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KahlerVector(Vec<i64>);

impl KahlerVector {
    pub fn new(v: Vec<i64>) -> Result<Self> {
        if v.iter().all(|&x| x == 0) {
            return Err(Error::DegenerateKahler);
        }
        Ok(KahlerVector(v))
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

/// An integral class proposed as a first Chern class of a circle bundle.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ChernCandidate {
    pub a: Vec<i64>,
    pub primitive: bool,
    /// `(coordinate, k)`: the coordinate must be coprime to `k`.
    pub coprime: Vec<(usize, i64)>,
}

impl ChernCandidate {
    pub fn new(a: Vec<i64>) -> Result<Self> {
        if a.iter().all(|&x| x == 0) {
            return Err(Error::NoSolutions("a Chern candidate must be nonzero".into()));
        }
        let primitive = content(&a) == 1;
        Ok(ChernCandidate { a, primitive, coprime: Vec::new() })
    }

    pub fn with_coprime(mut self, coordinate: usize, k: i64) -> Self {
        self.coprime.push((coordinate, k));
        self
    }

    /// Whether every recorded coprimality constraint holds.
    pub fn satisfies_constraints(&self) -> bool {
        self.coprime.iter().all(|&(i, k)| self.a.get(i).is_some_and(|&e| seifert_filter(e, k)))
    }
}

/// Smoothness of the Seifert circle bundle with Chern class `eE + …` over an
/// orbifold with a `Z_k` point: `gcd(e, k) = 1`.
///
/// `k ≥ 2` is the meaningful range; `k = 1` accepts every class.
pub fn seifert_filter(e: i64, k: i64) -> bool {
    e.gcd(&k) == 1
}

/// Options for [`chern_scan`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanFilters {
    /// Minimum kernel rank; fewer gives [`Error::NoSolutions`].
    pub min_independent: usize,
    /// Bound on the absolute value of every candidate entry.
    pub max_coeff: i64,
    /// Coprimality constraints `(coordinate, k)` applied to candidates.
    pub coprime: Vec<(usize, i64)>,
    pub max_candidates: usize,
}

impl Default for ScanFilters {
    fn default() -> Self {
        ScanFilters { min_independent: 2, max_coeff: 50, coprime: Vec::new(), max_candidates: 20 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanResult {
    /// Lcm of the denominators of the intersection form.
    pub clearing_factor: i64,
    /// `Qk` scaled to a primitive integer covector.
    pub functional: Vec<i64>,
    pub kernel_basis: Vec<Vec<i64>>,
    /// Primitive kernel vectors passing the filters, smallest first.
    pub candidates: Vec<ChernCandidate>,
    /// Rank of the candidate set.
    pub candidate_rank: usize,
}

impl ScanResult {
    pub fn kernel_rank(&self) -> usize {
        self.kernel_basis.len()
    }

    /// The first two linearly independent candidates.
    pub fn independent_pair(&self) -> Option<(ChernCandidate, ChernCandidate)> {
        let first = self.candidates.first()?;
        let second = self.candidates.iter().skip(1).find(|c| integer_rank(&[first.a.clone(), c.a.clone()]).ok() == Some(2))?;
        Some((first.clone(), second.clone()))
    }
}

/// An integral basis of `{a ∈ Zᵐ : aᵀQk = 0}` together with small primitive
/// candidates from that sublattice.
pub fn chern_scan(l: &IntersectionLattice, k: &KahlerVector, filters: &ScanFilters) -> Result<ScanResult> {
    let qk = l.apply(k.as_slice())?;
    if qk.iter().all(Zero::is_zero) {
        return Err(Error::DegenerateKahler);
    }
    let functional = clear_denominators(&qk)?;
    let mut kernel_basis = integer_kernel(std::slice::from_ref(&functional), l.rank())?;
    size_reduce(&mut kernel_basis)?;
    if kernel_basis.len() < filters.min_independent {
        return Err(Error::NoSolutions(format!(
            "kernel rank {} is below the requested {} independent classes",
            kernel_basis.len(),
            filters.min_independent
        )));
    }
    let candidates = enumerate(&kernel_basis, filters)?;
    let candidate_rank = integer_rank(&candidates.iter().map(|c| c.a.clone()).collect::<Vec<_>>())?;
    Ok(ScanResult { clearing_factor: l.clearing_factor()?, functional, kernel_basis, candidates, candidate_rank })
}

/// Multiplies a rational vector by the lcm of its denominators and divides by
/// the gcd of the result.
pub fn clear_denominators(v: &[Q]) -> Result<Vec<i64>> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    ints.iter()
        .map(|x| if g.is_zero() { Some(0) } else { (x / &g).to_i64() })
        .collect::<Option<Vec<_>>>()
        .ok_or(Error::Overflow)
}

/// Gcd of the entries, `0` for the zero vector.
pub fn content(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, x| g.gcd(x))
}

/// An integral basis of the kernel of an integer matrix with `m` columns.
///
/// Column operations with unimodular transforms bring the matrix to column
/// echelon form; the columns of the accumulated transform that sit over
/// zero columns span the kernel lattice.
pub fn integer_kernel(rows: &[Vec<i64>], m: usize) -> Result<Vec<Vec<i64>>> {
    let (_, u, pivots) = column_echelon(rows, m)?;
    Ok((pivots..m).map(|c| (0..m).map(|r| u[r][c]).collect()).collect())
}

/// Rank of a set of integer vectors of common length.
pub fn integer_rank(vectors: &[Vec<i64>]) -> Result<usize> {
    let Some(first) = vectors.first() else { return Ok(0) };
    let m = first.len();
    if vectors.iter().any(|v| v.len() != m) {
        return Err(Error::DimensionMismatch("vectors of different lengths".into()));
    }
    Ok(column_echelon(vectors, m)?.2)
}

fn column_echelon(rows: &[Vec<i64>], m: usize) -> Result<(Vec<Vec<i64>>, Vec<Vec<i64>>, usize)> {
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::DimensionMismatch(format!("rows must have {m} columns")));
    }
    let mut a: Vec<Vec<i64>> = rows.to_vec();
    let mut u: Vec<Vec<i64>> = (0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect();
    let mut pivot = 0;
    for i in 0..a.len() {
        if pivot == m {
            break;
        }
        for j in pivot + 1..m {
            let (x, y) = (a[i][pivot], a[i][j]);
            if y == 0 {
                continue;
            }
            let e = x.extended_gcd(&y);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let (yg, xg) = (y / g, x / g);
            combine_columns(&mut a, pivot, j, s, t, -yg, xg)?;
            combine_columns(&mut u, pivot, j, s, t, -yg, xg)?;
        }
        if a[i][pivot] != 0 {
            pivot += 1;
        }
    }
    Ok((a, u, pivot))
}

/// `(col_c, col_j) ← (s·col_c + t·col_j, p·col_c + q·col_j)`.
fn combine_columns(mat: &mut [Vec<i64>], c: usize, j: usize, s: i64, t: i64, p: i64, q: i64) -> Result<()> {
    for row in mat.iter_mut() {
        let (x, y) = (row[c], row[j]);
        row[c] = lin(s, x, t, y)?;
        row[j] = lin(p, x, q, y)?;
    }
    Ok(())
}

fn lin(a: i64, x: i64, b: i64, y: i64) -> Result<i64> {
    a.checked_mul(x).and_then(|u| b.checked_mul(y).and_then(|v| u.checked_add(v))).ok_or(Error::Overflow)
}

fn dot(a: &[i64], b: &[i64]) -> Result<i64> {
    a.iter().zip(b).try_fold(0i64, |s, (x, y)| x.checked_mul(*y).and_then(|p| s.checked_add(p))).ok_or(Error::Overflow)
}

/// Pairwise Gauss reduction in the Euclidean norm, then sort by norm and fix
/// signs. Only unimodular steps are taken, so the lattice is unchanged.
fn size_reduce(basis: &mut [Vec<i64>]) -> Result<()> {
    let n = basis.len();
    let mut changed = true;
    let mut sweeps = 0;
    while changed && sweeps < 64 {
        changed = false;
        sweeps += 1;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let bj = dot(&basis[j], &basis[j])?;
                if bj == 0 {
                    continue;
                }
                let num = dot(&basis[i], &basis[j])?;
                let mu = Q::new(num.into(), bj.into()).round().to_integer().to_i64().ok_or(Error::Overflow)?;
                if mu != 0 {
                    let bj_vec = basis[j].clone();
                    for (x, y) in basis[i].iter_mut().zip(&bj_vec) {
                        *x = lin(1, *x, -mu, *y)?;
                    }
                    changed = true;
                }
            }
        }
    }
    for v in basis.iter_mut() {
        normalize_sign(v);
    }
    let mut keyed = basis.iter().map(|v| Ok((dot(v, v)?, v.clone()))).collect::<Result<Vec<_>>>()?;
    keyed.sort();
    for (slot, (_, v)) in basis.iter_mut().zip(keyed) {
        *slot = v;
    }
    Ok(())
}

fn normalize_sign(v: &mut [i64]) {
    if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Primitive lattice vectors `Σ cⱼ bⱼ` with every entry bounded by
/// `max_coeff`, visiting at most [`ENUMERATION_BUDGET`] coefficient tuples.
fn enumerate(basis: &[Vec<i64>], filters: &ScanFilters) -> Result<Vec<ChernCandidate>> {
    let r = basis.len();
    if r == 0 {
        return Ok(Vec::new());
    }
    let m = basis[0].len();
    let bound = filters.max_coeff.max(1);
    let mut c_max = bound;
    while c_max > 1 && (2 * c_max as u64 + 1).checked_pow(r as u32).map_or(true, |n| n > ENUMERATION_BUDGET) {
        c_max -= 1;
    }
    let mut found = BTreeSet::new();
    let mut coeffs = vec![-c_max; r];
    loop {
        let mut a = vec![0i64; m];
        for (cj, bj) in coeffs.iter().zip(basis) {
            for (x, y) in a.iter_mut().zip(bj) {
                *x = lin(1, *x, *cj, *y)?;
            }
        }
        if a.iter().any(|&x| x != 0) && a.iter().all(|x| x.abs() <= bound) && content(&a) == 1 {
            normalize_sign(&mut a);
            let norm: i64 = a.iter().map(|x| x.abs()).max().unwrap_or(0);
            let l1: i64 = a.iter().map(|x| x.abs()).sum();
            found.insert((norm, l1, a));
        }
        let mut i = 0;
        loop {
            if i == r {
                let mut out = Vec::new();
                for (_, _, a) in found {
                    let mut cand = ChernCandidate::new(a)?;
                    for &(coord, k) in &filters.coprime {
                        cand = cand.with_coprime(coord, k);
                    }
                    if cand.satisfies_constraints() {
                        out.push(cand);
                        if out.len() == filters.max_candidates {
                            break;
                        }
                    }
                }
                return Ok(out);
            }
            coeffs[i] += 1;
            if coeffs[i] > c_max {
                coeffs[i] = -c_max;
                i += 1;
            } else {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn del_pezzo(m: usize) -> IntersectionLattice {
        let mut d = vec![q(1, 1)];
        d.extend(std::iter::repeat(q(-1, 1)).take(m - 1));
        IntersectionLattice::diagonal(&d, Vec::new()).unwrap()
    }

    #[test]
    fn del_pezzo_kernel_has_rank_three() {
        let l = del_pezzo(4);
        let k = KahlerVector::new(vec![3, 1, 1, 1]).unwrap();
        let res = chern_scan(&l, &k, &ScanFilters::default()).unwrap();
        assert_eq!(res.kernel_rank(), 3);
        assert_eq!(integer_rank(&res.kernel_basis).unwrap(), 3);
        for v in res.kernel_basis.iter().chain(res.candidates.iter().map(|c| &c.a)) {
            assert!(l.pairing(v, k.as_slice()).unwrap().is_zero());
        }
        let cands: Vec<_> = res.candidates.iter().map(|c| c.a.clone()).collect();
        assert!(cands.contains(&vec![1, 1, 1, 1]));
        assert!(cands.contains(&vec![0, 1, -1, 0]));
        let (a, b) = res.independent_pair().unwrap();
        assert_eq!(integer_rank(&[a.a, b.a]).unwrap(), 2);
    }

    #[test]
    fn kernel_basis_generates_the_whole_sublattice() {
        // 3a₀ − a₁ − a₂ − a₃ = 0 is solved by a₁, a₂ free and a₃ = 3a₀ − a₁ − a₂;
        // the free parameters (a₀, a₁, a₂) must be a unimodular image of the basis.
        let res = chern_scan(&del_pezzo(4), &KahlerVector::new(vec![3, 1, 1, 1]).unwrap(), &ScanFilters::default()).unwrap();
        let coords: Vec<Vec<i64>> = res.kernel_basis.iter().map(|v| v[..3].to_vec()).collect();
        let det = coords[0][0] * (coords[1][1] * coords[2][2] - coords[1][2] * coords[2][1])
            - coords[0][1] * (coords[1][0] * coords[2][2] - coords[1][2] * coords[2][0])
            + coords[0][2] * (coords[1][0] * coords[2][1] - coords[1][1] * coords[2][0]);
        assert_eq!(det.abs(), 1);
    }

    #[test]
    fn orbifold_form_simplifies_the_weight_away() {
        for k in 2..8 {
            let l = IntersectionLattice::diagonal(&[q(1, k), q(-1, 1), q(-1, 1)], Vec::new()).unwrap();
            assert_eq!(l.clearing_factor().unwrap(), k);
            let (e_tilde, d1, d2) = (2, 1, 3);
            let kv = KahlerVector::new(vec![k * e_tilde, d1, d2]).unwrap();
            let res = chern_scan(&l, &kv, &ScanFilters::default()).unwrap();
            assert_eq!(res.functional, vec![2, -1, -3]);
            for v in &res.kernel_basis {
                assert_eq!(e_tilde * v[0] - d1 * v[1] - d2 * v[2], 0);
            }
        }
    }

    #[test]
    fn excess_independence_is_rejected() {
        let f = ScanFilters { min_independent: 4, ..ScanFilters::default() };
        let err = chern_scan(&del_pezzo(4), &KahlerVector::new(vec![3, 1, 1, 1]).unwrap(), &f).unwrap_err();
        assert!(matches!(err, Error::NoSolutions(_)));
    }

    #[test]
    fn isotropic_kahler_is_degenerate() {
        let l = IntersectionLattice::new(vec![vec![q(0, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]], Vec::new()).unwrap();
        assert_eq!(chern_scan(&l, &KahlerVector::new(vec![1, 0]).unwrap(), &ScanFilters::default()), Err(Error::DegenerateKahler));
        assert_eq!(KahlerVector::new(vec![0, 0]), Err(Error::DegenerateKahler));
    }

    #[test]
    fn asymmetric_forms_are_rejected() {
        let bad = vec![vec![q(1, 1), q(1, 1)], vec![q(0, 1), q(1, 1)]];
        assert!(IntersectionLattice::new(bad, Vec::new()).is_err());
    }

    #[test]
    fn seifert_examples() {
        assert!(!seifert_filter(2, 4));
        for k in 2..30 {
            assert!(seifert_filter(1, k));
            assert_eq!(seifert_filter(-(k + 2), k), k % 2 == 1);
        }
    }

    #[test]
    fn coprime_filter_applies_to_candidates() {
        let l = IntersectionLattice::diagonal(&[q(1, 3), q(-1, 1), q(-1, 1)], Vec::new()).unwrap();
        let f = ScanFilters { coprime: vec![(0, 3)], ..ScanFilters::default() };
        let res = chern_scan(&l, &KahlerVector::new(vec![3, 1, 1]).unwrap(), &f).unwrap();
        assert!(!res.candidates.is_empty());
        assert!(res.candidates.iter().all(|c| c.a[0] % 3 != 0 && c.primitive));
    }

    #[test]
    fn overflow_is_reported() {
        let big = i64::MAX / 2;
        let rows = vec![vec![big, big - 1, 3]];
        match integer_kernel(&rows, 3) {
            Ok(basis) => {
                for v in basis {
                    assert_eq!(dot(&v, &rows[0]).unwrap(), 0);
                }
            }
            Err(e) => assert_eq!(e, Error::Overflow),
        }
    }
}
