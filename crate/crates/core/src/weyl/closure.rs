use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::phase::{binom_wrapped, Phase};
use super::symbolic::{Atom, SymReal};
use super::system::PolySequence;
use crate::error::{Error, Result};
use crate::linalg::{annihilator_lattice, dot, greedy_extension, to_qvec, QVec, Subspace, ZVec};
use crate::polycore::{BiPoly, Monomial, RationalScalar};
use crate::progression::{graded_spaces, Progression};

/// Largest coset group accepted before giving up.
const MAX_COSETS: usize = 4096;
/// Grid cells scanned when locating attained translates.
const MAX_PERIOD_CELLS: u128 = 1 << 26;

/// A declared rational dependency `lhs = rhs` among sequence parameters.
#[derive(Clone, Debug)]
pub struct Dependency {
    pub text: String,
    pub lhs: SymReal,
    pub rhs: RationalScalar,
}

/// The orbit closure of `g^P(x, y) = (g(x), g(x + P_1(y)), …, g(x + P_t(y)))`
/// in `(ℝ^s/ℤ^s)^{t+1}`: a finite union of translates of the subtorus `G̃`.
///
/// Coordinates of `ℝ^{s(t+1)}` are ordered `l(t+1) + i` for torus
/// coordinate `l` and progression index `i`.
#[derive(Clone, Debug)]
pub struct AffineClosure {
    pub s: usize,
    pub t: usize,
    pub offset: Vec<SymReal>,
    pub offset_phase: Vec<Phase>,
    /// Basis of `G̃`.
    pub subspace_basis: Vec<QVec>,
    pub gp_basis: Vec<QVec>,
    pub k_basis: Vec<QVec>,
    pub contains_k: bool,
    /// The group generated by the attained translates; entry 0 is zero.
    pub coset_shifts: Vec<QVec>,
    /// `(index into coset_shifts, asymptotic density)` for translates the orbit visits.
    pub attained: Vec<(usize, f64)>,
    pub declared_dependencies: Vec<String>,
    pub atoms: Vec<String>,
    /// ℤ-basis of the integer characters vanishing on `G̃`.
    pub annihilators: Vec<ZVec>,
    pub(crate) monomials: Vec<(Monomial, Vec<SymReal>)>,
    gtilde: Subspace,
    gp: Subspace,
    projector: Vec<Vec<f64>>,
    shift_phases: Vec<Vec<Phase>>,
    seq: PolySequence,
    terms: Vec<crate::polycore::UniPoly>,
}

impl AffineClosure {
    pub fn ambient(&self) -> usize {
        self.s * (self.t + 1)
    }

    pub fn dim(&self) -> usize {
        self.gtilde.dim()
    }

    pub fn gp_dim(&self) -> usize {
        self.gp.dim()
    }

    pub fn k_dim(&self) -> usize {
        self.k_basis.len()
    }

    pub fn subspace(&self) -> &Subspace {
        &self.gtilde
    }

    pub fn gp_subspace(&self) -> &Subspace {
        &self.gp
    }

    pub fn index(&self, l: usize, i: usize) -> usize {
        l * (self.t + 1) + i
    }

    /// `g^P(x, y)` on the torus.
    pub fn point(&self, x: i128, y: i64) -> Vec<Phase> {
        let shifts: Vec<i128> =
            self.terms.iter().map(|p| p.eval_int(y).to_integer().to_i128().expect("P(y) fits i128")).collect();
        self.point_shifted(x, &shifts)
    }

    /// `g^P` at `x` given `P_i(y)` for every `i`.
    fn point_shifted(&self, x: i128, shifts: &[i128]) -> Vec<Phase> {
        let mut out = vec![Phase::ZERO; self.ambient()];
        for (i, &p) in shifts.iter().enumerate() {
            for (l, v) in self.seq.eval(x + p).into_iter().enumerate() {
                out[l * (self.t + 1) + i] = v;
            }
        }
        out
    }

    /// Largest [`distance`](Self::distance) over `0 ≤ x, y < n`.
    pub fn max_distance(&self, n: usize) -> f64 {
        let table: Vec<Vec<i128>> = (0..n as i64)
            .map(|y| self.terms.iter().map(|p| p.eval_int(y).to_integer().to_i128().expect("P(y) fits i128")).collect())
            .collect();
        table
            .par_iter()
            .map(|shifts| (0..n as i128).map(|x| self.distance(&self.point_shifted(x, shifts))).fold(0.0, f64::max))
            .reduce(|| 0.0, f64::max)
    }

    /// Upper bound on the wraparound distance from `p` to the union of the
    /// translates `offset + σ + G̃`.
    pub fn distance(&self, p: &[Phase]) -> f64 {
        if self.annihilators.is_empty() {
            return 0.0;
        }
        let base: Vec<Phase> = self
            .annihilators
            .iter()
            .map(|eta| {
                eta.iter().zip(p.iter().zip(&self.offset_phase)).fold(Phase::ZERO, |acc, (c, (x, o))| {
                    acc + (*x - *o).mul_int(c.to_i128().expect("small annihilator"))
                })
            })
            .collect();
        self.shift_phases
            .iter()
            .map(|sp| {
                let r: Vec<f64> = base.iter().zip(sp).map(|(b, s)| (*b - *s).signed_turns()).collect();
                self.projector.iter().map(|row| row.iter().zip(&r).map(|(a, b)| a * b).sum::<f64>().abs()).fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

fn frac(q: &RationalScalar) -> RationalScalar {
    q - BigRational::from_integer(q.floor().to_integer())
}

/// Basis of `Σ_{k ≤ l+1} 𝒫_k` placed in block `l`, for `l < s`.
fn block_basis(s: usize, t: usize, spaces: &[Vec<QVec>]) -> Vec<QVec> {
    let n = t + 1;
    let mut out = Vec::new();
    for l in 0..s {
        let own = &spaces[l.min(spaces.len() - 1)];
        let mut chosen: Vec<QVec> = own.clone();
        let span = Subspace::span(n, &chosen);
        let lower: Vec<QVec> = spaces[..l.min(spaces.len())].iter().flatten().cloned().collect();
        for idx in greedy_extension(&span, &lower) {
            chosen.push(lower[idx].clone());
        }
        for v in chosen {
            let mut e = vec![BigRational::zero(); s * n];
            for (i, c) in v.into_iter().enumerate() {
                e[l * n + i] = c;
            }
            out.push(e);
        }
    }
    out
}

/// `G^P = Σ_k G_k ⊗ 𝒫_k` and `K = Σ_k G_k ⊗ 𝒫'_k` as τ-block bases.
pub fn gp_block_basis(prog: &Progression, s: usize) -> Result<(Vec<QVec>, Vec<QVec>)> {
    let cap = s.max(prog.default_cap());
    let graded = graded_spaces(prog, s, cap)?;
    let mut full = Vec::new();
    let mut prime = Vec::new();
    for k in 1..=s {
        let d = graded.degree(k).ok_or_else(|| Error::Internal("missing graded degree".into()))?;
        full.push(d.tau.clone());
        prime.push(d.prime_indices.iter().map(|&j| d.tau[j].clone()).collect::<Vec<_>>());
    }
    Ok((block_basis(s, prog.t(), &full), block_basis(s, prog.t(), &prime)))
}

pub fn closure_subspaces(prog: &Progression, seq: &PolySequence, deps: &[Dependency]) -> Result<AffineClosure> {
    if !seq.is_adapted() {
        return Err(Error::InvalidArgument("sequence is not adapted to the filtration G_k = {0}^{k-1} x R^{s-k+1}".into()));
    }
    for dep in deps {
        if !(&dep.lhs - &SymReal::from_rational(dep.rhs.clone())).is_zero() {
            return Err(Error::MalformedDependency(format!("{} does not hold for the given parameters", dep.text)));
        }
    }
    let s = seq.dim();
    let t = prog.t();
    let n = t + 1;
    let dd = s * n;
    let terms = prog.terms();

    // Vector coefficient c_m of each binomial monomial C(x,a)C(y,b).
    let mut coeff: BTreeMap<Monomial, Vec<SymReal>> = BTreeMap::new();
    for (k, g) in seq.coeffs().iter().enumerate().skip(1) {
        for (i, p) in terms.iter().enumerate() {
            for (m, c) in BiPoly::shifted_binomial(p, k).to_binomial_view() {
                let entry = coeff.entry(m).or_insert_with(|| vec![SymReal::zero(); dd]);
                for (l, gl) in g.iter().enumerate() {
                    if !gl.is_zero() {
                        let idx = l * n + i;
                        entry[idx] = &entry[idx] + &gl.scale(&c);
                    }
                }
            }
        }
    }
    coeff.retain(|_, v| v.iter().any(|c| !c.is_zero()));
    let offset: Vec<SymReal> = (0..dd).map(|idx| seq.coeffs()[0][idx / n].clone()).collect();

    let atoms: BTreeSet<Atom> = coeff.values().flatten().flat_map(|c| c.atom_terms().keys().copied()).collect();
    let atom_rows: Vec<QVec> = coeff
        .values()
        .flat_map(|v| atoms.iter().map(move |a| v.iter().map(|c| c.coeff(*a)).collect::<QVec>()))
        .collect();
    let gtilde = Subspace::span(dd, &atom_rows);
    let rational_parts: Vec<QVec> = coeff.values().map(|v| v.iter().map(|c| c.rational_part().clone()).collect()).collect();

    let (gp_basis, k_basis) = gp_block_basis(prog, s)?;
    let gp = Subspace::span(dd, &gp_basis);
    let k_space = Subspace::span(dd, &k_basis);
    if !gp.contains_subspace(&gtilde) {
        return Err(Error::Internal("closure subspace escapes G^P".into()));
    }
    let contains_k = gtilde.contains_subspace(&k_space);

    // Translates: the quotient (G̃ + ℤ^D) is detected by the annihilator lattice.
    let annihilators = annihilator_lattice(&gtilde);
    let key = |v: &QVec| -> Vec<RationalScalar> { annihilators.iter().map(|eta| frac(&dot(&to_qvec(eta), v))).collect() };
    let gen_keys: Vec<Vec<RationalScalar>> = rational_parts.iter().map(key).collect();
    let den = gen_keys.iter().flatten().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let den_i = den.to_i64().ok_or_else(|| Error::Internal("coset denominator too large".into()))?;
    let int_key = |k: &[RationalScalar]| -> Vec<i64> {
        k.iter().map(|q| (q * BigRational::from_integer(den.clone())).to_integer().to_i64().expect("small")).collect()
    };
    let gens: Vec<Vec<i64>> = gen_keys.iter().map(|k| int_key(k)).collect();

    let zero_key = vec![0i64; annihilators.len()];
    let mut index: HashMap<Vec<i64>, usize> = HashMap::from([(zero_key.clone(), 0)]);
    let mut shifts: Vec<QVec> = vec![vec![BigRational::zero(); dd]];
    let mut queue = VecDeque::from([zero_key]);
    while let Some(cur) = queue.pop_front() {
        let rep = shifts[index[&cur]].clone();
        for (g, r) in gens.iter().zip(&rational_parts) {
            let next: Vec<i64> = cur.iter().zip(g).map(|(a, b)| (a + b).rem_euclid(den_i)).collect();
            if index.contains_key(&next) {
                continue;
            }
            if shifts.len() >= MAX_COSETS {
                return Err(Error::Internal(format!("more than {} translates", MAX_COSETS)));
            }
            index.insert(next.clone(), shifts.len());
            shifts.push(rep.iter().zip(r).map(|(a, b)| a + b).collect());
            queue.push_back(next);
        }
    }

    let max_deg = coeff.keys().map(|(a, b)| (*a).max(*b) as usize).max().unwrap_or(0);
    let period = binomial_period(den_i, max_deg as i64);
    if (period as u128).pow(2) > MAX_PERIOD_CELLS {
        return Err(Error::BudgetExceeded { needed: (period as u128).pow(2), budget: MAX_PERIOD_CELLS });
    }
    let mut counts = vec![0usize; shifts.len()];
    let monos: Vec<Monomial> = coeff.keys().copied().collect();
    for x in 0..period {
        for y in 0..period {
            let mut acc = vec![0i64; annihilators.len()];
            for (m, g) in monos.iter().zip(&gens) {
                let v = (binom_wrapped(x as i128, m.0 as usize) as i128 * binom_wrapped(y as i128, m.1 as usize) as i128)
                    .rem_euclid(den_i as i128) as i64;
                for (a, gi) in acc.iter_mut().zip(g) {
                    *a = (*a + v * gi).rem_euclid(den_i);
                }
            }
            counts[index[&acc]] += 1;
        }
    }
    let total = (period * period) as f64;
    let attained: Vec<(usize, f64)> =
        counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (i, c as f64 / total)).collect();

    let shift_phases: Vec<Vec<Phase>> = shifts
        .iter()
        .map(|sh| annihilators.iter().map(|eta| SymReal::from_rational(dot(&to_qvec(eta), sh)).phase()).collect())
        .collect();
    let projector = min_norm_projector(&annihilators);

    Ok(AffineClosure {
        s,
        t,
        offset_phase: offset.iter().map(SymReal::phase).collect(),
        offset,
        subspace_basis: gtilde.basis().to_vec(),
        gp_basis,
        k_basis: k_space.basis().to_vec(),
        contains_k,
        coset_shifts: shifts,
        attained,
        declared_dependencies: deps.iter().map(|d| d.text.clone()).collect(),
        atoms: atoms.iter().map(|a| a.render()).collect(),
        annihilators,
        monomials: coeff.into_iter().collect(),
        gtilde,
        gp,
        projector,
        shift_phases,
        seq: seq.clone(),
        terms,
    })
}

/// Common period of `x ↦ C(x, a) mod d` for all `a ≤ max_deg`.
///
/// For `p^e ∥ d` the period of `C(x, a) mod p^e` divides `p^{e + ⌊log_p a⌋}`.
fn binomial_period(d: i64, max_deg: i64) -> i64 {
    let (mut rest, mut period, mut p) = (d, 1i64, 2i64);
    while rest > 1 {
        if rest % p == 0 {
            while rest % p == 0 {
                rest /= p;
                period *= p;
            }
            let mut q = p;
            while q <= max_deg {
                period *= p;
                q *= p;
            }
        }
        p += 1;
    }
    period
}

/// `Λᵀ (Λ Λᵀ)^{-1}`: maps residuals `r` to the least-norm `δ` with `Λ δ = r`.
fn min_norm_projector(lam: &[ZVec]) -> Vec<Vec<f64>> {
    let r = lam.len();
    if r == 0 {
        return Vec::new();
    }
    let d = lam[0].len();
    let a: Vec<Vec<f64>> = lam.iter().map(|v| v.iter().map(|c| c.to_f64().unwrap_or(0.0)).collect()).collect();
    let mut g: Vec<Vec<f64>> = (0..r).map(|i| (0..r).map(|j| a[i].iter().zip(&a[j]).map(|(x, y)| x * y).sum()).collect()).collect();
    let mut inv: Vec<Vec<f64>> = (0..r).map(|i| (0..r).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for col in 0..r {
        let piv = (col..r).max_by(|&x, &y| g[x][col].abs().total_cmp(&g[y][col].abs())).expect("nonempty");
        g.swap(col, piv);
        inv.swap(col, piv);
        let p = g[col][col];
        for j in 0..r {
            g[col][j] /= p;
            inv[col][j] /= p;
        }
        for row in 0..r {
            if row != col {
                let f = g[row][col];
                for j in 0..r {
                    g[row][j] -= f * g[col][j];
                    inv[row][j] -= f * inv[col][j];
                }
            }
        }
    }
    (0..d).map(|k| (0..r).map(|j| (0..r).map(|i| a[i][k] * inv[i][j]).sum()).collect()).collect()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qvec_from_ints;
    use crate::weyl::WeylSystem;

    fn sec8(b: &str) -> (Progression, PolySequence) {
        let p = Progression::from_int_coeffs(&[&[0, 1], &[0, 2], &[0, 0, 1]]).unwrap();
        let a = SymReal::parse("sqrt(2)").unwrap();
        let b = SymReal::parse(b).unwrap();
        let z = SymReal::zero;
        let seq = PolySequence::new(vec![vec![z(), z()], vec![a, z()], vec![z(), b]]).unwrap();
        (p, seq)
    }

    fn e(i: usize) -> QVec {
        crate::linalg::unit(8, i - 1)
    }

    #[test]
    fn binomial_periods() {
        assert_eq!(binomial_period(1, 9), 1);
        assert_eq!(binomial_period(3, 2), 3);
        assert_eq!(binomial_period(4, 3), 8);
        assert_eq!(binomial_period(12, 4), 144);
        for (d, a) in [(3i64, 2usize), (4, 3), (6, 3), (9, 4), (8, 2)] {
            let per = binomial_period(d, a as i64);
            for x in 0..3 * per {
                let v = |u: i64| crate::polycore::binomial_bigint(&u.into(), a) % d;
                assert_eq!(v(x), v(x + per), "d={} a={} x={}", d, a, x);
            }
        }
    }

    #[test]
    fn quadratic_dependent() {
        let (p, seq) = sec8("sqrt(2) + 1/3");
        let dep = Dependency {
            text: "b - a = 1/3".into(),
            lhs: &SymReal::parse("sqrt(2) + 1/3").unwrap() - &SymReal::parse("sqrt(2)").unwrap(),
            rhs: BigRational::new(1.into(), 3.into()),
        };
        let c = closure_subspaces(&p, &seq, &[dep]).unwrap();
        assert_eq!(c.dim(), 6);
        assert_eq!(c.gp_dim(), 7);
        let v = |xs: &[usize]| xs.iter().fold(vec![BigRational::zero(); 8], |acc, &i| acc.iter().zip(e(i)).map(|(a, b)| a + b).collect());
        let v12 = qvec_from_ints(&[0, 1, 2, 0, 0, 0, 0, 0]);
        let v22 = qvec_from_ints(&[0, 0, 0, 0, 0, 1, 2, 0]);
        for w in [v(&[1, 2, 3, 4]), v12, v(&[4, 7]), v(&[5, 6, 7, 8]), v22, v(&[8])] {
            assert!(c.subspace().contains(&w));
        }
        assert!(!c.subspace().contains(&e(7)));
        assert_eq!(c.coset_shifts.len(), 3);
        assert_eq!(c.attained.len(), 2);
        assert!(c.contains_k);
        for (x, y) in [(0, 0), (5, 7), (123, 456), (-40, 1999)] {
            assert!(c.distance(&c.point(x, y)) < 1e-9);
        }
    }

    #[test]
    fn quadratic_independent_and_bad_dependency() {
        let (p, seq) = sec8("sqrt(3)");
        let c = closure_subspaces(&p, &seq, &[]).unwrap();
        assert_eq!(c.dim(), 7);
        assert_eq!(c.coset_shifts.len(), 1);
        let bad = Dependency { text: "b - a = 1/3".into(), lhs: &SymReal::sqrt(3) - &SymReal::sqrt(2), rhs: BigRational::new(1.into(), 3.into()) };
        assert!(matches!(closure_subspaces(&p, &seq, &[bad]), Err(Error::MalformedDependency(_))));
    }

    #[test]
    fn homogeneous_cubic_is_gp() {
        let p = Progression::from_int_coeffs(&[&[0, 1], &[0, 2], &[0, 0, 0, 1]]).unwrap();
        let w = WeylSystem::new(SymReal::sqrt(2), vec![SymReal::sqrt(3), SymReal::sqrt(5)]).unwrap();
        let c = closure_subspaces(&p, w.sequence(), &[]).unwrap();
        assert_eq!(c.dim(), c.gp_dim());
        assert_eq!(c.dim(), c.k_dim());
        assert_eq!(c.coset_shifts.len(), 1);
        assert!(c.distance(&c.point(17, 3)) < 1e-9);
    }
}
