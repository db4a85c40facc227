use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use super::closure::AffineClosure;
use super::phase::{binom_wrapped, Phase};
use super::symbolic::SymReal;
use crate::cyclic::kahan_sum;
use crate::error::{Error, Result};
use crate::linalg::{dot, integer_coordinates, saturated_lattice, solve_coordinates, to_qvec, QVec};

const TAYLOR_TERMS: usize = 14;
const MAX_TABLES: usize = 32;
const WORST_ROWS: usize = 10;
const DIRECT_LIMIT: usize = 40_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct CharacterRow {
    /// Coordinates of the character on the `G^P` lattice basis.
    pub m: Vec<i64>,
    pub predicted: f64,
    pub observed: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquidistReport {
    pub n: usize,
    pub radius: i64,
    /// `tau-blocks` when the τ-block vectors form a ℤ-basis of `G^P ∩ ℤ^D`, otherwise `lattice`.
    pub coordinates: String,
    pub gp_dim: usize,
    /// Nontrivial characters tested, one per `±m` pair.
    pub characters: usize,
    /// Largest `|average|` over characters not vanishing on `G̃`.
    pub max_nonannihilating: f64,
    pub worst: Vec<CharacterRow>,
    /// Characters vanishing on `G̃`, with the modulus predicted from the coset weights.
    pub annihilating: Vec<CharacterRow>,
    pub max_prediction_error: f64,
    pub fast_path: bool,
}

/// `F(β) = (1/N) Σ_{x<N} e(q C(x,2) + βx)` via zero-padded transforms of `a_x (x/N)^p`.
struct TaylorTable {
    n: usize,
    m: usize,
    h: Vec<Vec<Complex64>>,
}

impl TaylorTable {
    fn new(q: Phase, n: usize) -> Self {
        let m = (8 * n).next_power_of_two();
        let fft = FftPlanner::new().plan_fft_inverse(m);
        let a: Vec<Complex64> = (0..n).map(|x| q.mul_wrapped(binom_wrapped(x as i128, 2)).e()).collect();
        let h = (0..TAYLOR_TERMS)
            .map(|p| {
                let mut buf = vec![Complex64::zero(); m];
                for (x, v) in a.iter().enumerate() {
                    buf[x] = v * (x as f64 / n as f64).powi(p as i32);
                }
                fft.process(&mut buf);
                buf
            })
            .collect();
        Self { n, m, h }
    }

    fn eval(&self, beta: Phase) -> Complex64 {
        let t = beta.turns() * self.m as f64;
        let r = t.round();
        let k = (r as usize) % self.m;
        let z = Complex64::new(0.0, TAU * (t - r) / self.m as f64 * self.n as f64);
        let mut acc = Complex64::zero();
        let mut pow = Complex64::new(1.0, 0.0);
        for (p, h) in self.h.iter().enumerate() {
            if p > 0 {
                pow = pow * z / p as f64;
            }
            acc += pow * h[k];
        }
        acc / self.n as f64
    }
}

/// Per-coordinate phase data in the chosen `G^P` basis.
struct Coords {
    /// `κ[mono][j]`.
    kappa: Vec<((u32, u32), Vec<Phase>)>,
    offset: Vec<Phase>,
    r: usize,
}

fn sym_coordinates(basis: &[QVec], v: &[SymReal]) -> Result<Vec<SymReal>> {
    let r = basis.len();
    let rational: QVec = v.iter().map(|c| c.rational_part().clone()).collect();
    let solve = |w: &QVec| -> Result<QVec> {
        if w.iter().all(Zero::is_zero) {
            return Ok(vec![BigRational::zero(); r]);
        }
        solve_coordinates(basis, w).ok_or_else(|| Error::Internal("orbit coefficient outside G^P".into()))
    };
    let mut out: Vec<SymReal> = solve(&rational)?.into_iter().map(SymReal::from_rational).collect();
    let atoms: std::collections::BTreeSet<_> = v.iter().flat_map(|c| c.atom_terms().keys().copied()).collect();
    for a in atoms {
        let part: QVec = v.iter().map(|c| c.coeff(a)).collect();
        for (o, c) in out.iter_mut().zip(solve(&part)?) {
            *o = &*o + &SymReal::atom(a).scale(&c);
        }
    }
    Ok(out)
}

fn choose_basis(closure: &AffineClosure) -> (Vec<QVec>, String) {
    let tau = closure.gp_basis.clone();
    let lattice = saturated_lattice(closure.gp_subspace());
    let integral = tau.iter().all(|v| v.iter().all(|c| c.is_integer()));
    if integral {
        let zb: Vec<_> = tau.iter().map(|v| v.iter().map(|c| c.to_integer()).collect::<Vec<_>>()).collect();
        if lattice.iter().all(|u| integer_coordinates(&zb, u).is_some()) {
            return (tau, "tau-blocks".into());
        }
    }
    (lattice.iter().map(|v| to_qvec(v)).collect(), "lattice".into())
}

fn odometer(v: &mut [i64], radius: i64) -> bool {
    for x in v.iter_mut().rev() {
        if *x < radius {
            *x += 1;
            return true;
        }
        *x = -radius;
    }
    false
}

fn sign(v: &[i64]) -> i64 {
    v.iter().find(|&&x| x != 0).map_or(0, |x| x.signum())
}

/// `|E_{x,y<N} e(η·g^P(x,y))|` for every character `η` on `G^P` with coordinates in `[-radius, radius]`.
pub fn equidistribution_test(closure: &AffineClosure, n: usize, radius: i64) -> Result<EquidistReport> {
    if n == 0 || radius < 0 {
        return Err(Error::InvalidArgument("need N >= 1 and radius >= 0".into()));
    }
    let (basis, coordinates) = choose_basis(closure);
    let r = basis.len();
    let mut kappa = Vec::new();
    for (mono, v) in &closure.monomials {
        let c = sym_coordinates(&basis, v)?;
        kappa.push((*mono, c.iter().map(SymReal::phase).collect::<Vec<_>>()));
    }
    let offset: Vec<Phase> = sym_coordinates(&basis, &closure.offset)?.iter().map(SymReal::phase).collect();
    let coords = Coords { kappa, offset, r };

    // Predictions from G̃ and the attained translates.
    let gt: Vec<QVec> = closure
        .subspace_basis
        .iter()
        .map(|u| solve_coordinates(&basis, u).ok_or_else(|| Error::Internal("G̃ outside G^P".into())))
        .collect::<Result<_>>()?;
    let shifts: Vec<(QVec, f64)> = closure
        .attained
        .iter()
        .map(|(i, w)| {
            solve_coordinates(&basis, &closure.coset_shifts[*i])
                .map(|c| (c, *w))
                .ok_or_else(|| Error::Internal("translate outside G^P".into()))
        })
        .collect::<Result<_>>()?;
    let predict = |m: &[i64]| -> Option<f64> {
        let mq: QVec = m.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        if gt.iter().any(|u| !dot(&mq, u).is_zero()) {
            return None;
        }
        let s = shifts.iter().map(|(c, w)| SymReal::from_rational(dot(&mq, c)).phase().e() * *w);
        Some(kahan_sum(s).norm())
    };

    let fast = coords.kappa.iter().all(|((a, b), _)| *a <= 1 || (*a == 2 && *b == 0));
    let results: Vec<(Vec<i64>, f64)> = if fast { fast_path(&coords, n, radius) } else { direct_path(&coords, n, radius)? };

    let mut report = EquidistReport {
        n,
        radius,
        coordinates,
        gp_dim: r,
        characters: results.len(),
        max_nonannihilating: 0.0,
        worst: Vec::new(),
        annihilating: Vec::new(),
        max_prediction_error: 0.0,
        fast_path: fast,
    };
    for (m, observed) in results {
        let predicted = predict(&m);
        let p = predicted.unwrap_or(0.0);
        report.max_prediction_error = report.max_prediction_error.max((observed - p).abs());
        match predicted {
            Some(_) => report.annihilating.push(CharacterRow { m, predicted: p, observed }),
            None => {
                report.max_nonannihilating = report.max_nonannihilating.max(observed);
                report.worst.push(CharacterRow { m, predicted: 0.0, observed });
                if report.worst.len() > 4 * WORST_ROWS {
                    report.worst.sort_by(|a, b| b.observed.total_cmp(&a.observed));
                    report.worst.truncate(WORST_ROWS);
                }
            }
        }
    }
    report.worst.sort_by(|a, b| b.observed.total_cmp(&a.observed));
    report.worst.truncate(WORST_ROWS);
    Ok(report)
}

fn fast_path(c: &Coords, n: usize, radius: i64) -> Vec<(Vec<i64>, f64)> {
    let r = c.r;
    let width = (2 * radius + 1) as usize;
    let x_dep = |j: usize| c.kappa.iter().any(|((a, _), k)| *a >= 1 && k[j] != Phase::ZERO);
    let quad = |j: usize| c.kappa.iter().filter(|((a, _), _)| *a == 2).map(|(_, k)| k[j]).fold(Phase::ZERO, |s, p| s + p);
    let mut jx: Vec<usize> = (0..r).filter(|&j| x_dep(j)).collect();
    jx.sort_by_key(|&j| quad(j) == Phase::ZERO);
    let jy: Vec<usize> = (0..r).filter(|&j| !x_dep(j)).collect();

    let pure: Vec<Vec<Phase>> = (0..r)
        .map(|j| {
            (0..n)
                .map(|y| {
                    c.kappa.iter().filter(|((a, _), _)| *a == 0).fold(c.offset[j], |s, ((_, b), k)| {
                        s + k[j].mul_wrapped(binom_wrapped(y as i128, *b as usize))
                    })
                })
                .collect()
        })
        .collect();
    let tables: Vec<Vec<Vec<Complex64>>> = pure
        .iter()
        .map(|ph| (-radius..=radius).map(|v| ph.iter().map(|p| p.mul_int(v as i128).e()).collect()).collect())
        .collect();
    let lin: Vec<Vec<Phase>> = (0..r)
        .map(|j| {
            (0..n)
                .map(|y| {
                    c.kappa.iter().filter(|((a, _), _)| *a == 1).fold(Phase::ZERO, |s, ((_, b), k)| {
                        s + k[j].mul_wrapped(binom_wrapped(y as i128, *b as usize))
                    })
                })
                .collect()
        })
        .collect();
    let quads: Vec<Phase> = (0..r).map(quad).collect();

    let mut groups: Vec<Vec<i64>> = Vec::new();
    let mut mx = vec![-radius; jx.len()];
    loop {
        if sign(&mx) >= 0 {
            groups.push(mx.clone());
        }
        if !odometer(&mut mx, radius) {
            break;
        }
    }
    let q_of = |mx: &[i64]| jx.iter().zip(mx).fold(Phase::ZERO, |s, (&j, &v)| s + quads[j].mul_int(v as i128));
    let mut distinct: Vec<Phase> = groups.iter().map(|g| q_of(g)).collect();
    distinct.sort();
    distinct.dedup();
    let cache: HashMap<Phase, TaylorTable> = if distinct.len() <= MAX_TABLES {
        distinct.par_iter().map(|&q| (q, TaylorTable::new(q, n))).collect()
    } else {
        HashMap::new()
    };

    groups
        .par_iter()
        .flat_map_iter(|mx| {
            let q = q_of(mx);
            let local;
            let table = match cache.get(&q) {
                Some(t) => t,
                None => {
                    local = TaylorTable::new(q, n);
                    &local
                }
            };
            let g: Vec<Complex64> = (0..n)
                .map(|y| {
                    let beta = jx.iter().zip(mx).fold(Phase::ZERO, |s, (&j, &v)| s + lin[j][y].mul_int(v as i128));
                    jx.iter()
                        .zip(mx)
                        .fold(table.eval(beta), |acc, (&j, &v)| acc * tables[j][(v + radius) as usize][y])
                })
                .collect();
            let x_zero = mx.iter().all(|&v| v == 0);
            let mut out = Vec::new();
            let mut my = vec![0i64; jy.len()];
            inner(&jy, &tables, radius, width, &g, 0, &mut my, x_zero, &mut |my, avg| {
                let mut m = vec![0i64; r];
                for (&j, &v) in jx.iter().zip(mx) {
                    m[j] = v;
                }
                for (&j, &v) in jy.iter().zip(my) {
                    m[j] = v;
                }
                out.push((m, avg));
            });
            out
        })
        .collect()
}

/// Recursively multiplies the pure-`y` tables for the coordinates in `jy`.
#[allow(clippy::too_many_arguments)]
fn inner(
    jy: &[usize],
    tables: &[Vec<Vec<Complex64>>],
    radius: i64,
    width: usize,
    acc: &[Complex64],
    level: usize,
    my: &mut Vec<i64>,
    x_zero: bool,
    emit: &mut dyn FnMut(&[i64], f64),
) {
    if level == jy.len() {
        if x_zero && sign(my) <= 0 {
            return;
        }
        let n = acc.len();
        emit(my, (kahan_sum(acc.iter().copied()) / n as f64).norm());
        return;
    }
    let j = jy[level];
    for idx in 0..width {
        let v = idx as i64 - radius;
        my[level] = v;
        // Skip branches whose sign pattern is already negative for x-free characters.
        if x_zero && sign(&my[..=level]) < 0 {
            continue;
        }
        let next: Vec<Complex64> = acc.iter().zip(&tables[j][idx]).map(|(a, b)| a * b).collect();
        inner(jy, tables, radius, width, &next, level + 1, my, x_zero, emit);
    }
    my[level] = 0;
}

fn direct_path(c: &Coords, n: usize, radius: i64) -> Result<Vec<(Vec<i64>, f64)>> {
    let r = c.r;
    if n * n * r > DIRECT_LIMIT {
        return Err(Error::BudgetExceeded { needed: (n * n * r) as u128, budget: DIRECT_LIMIT as u128 });
    }
    let phi: Vec<Vec<Phase>> = (0..r)
        .map(|j| {
            let mut out = Vec::with_capacity(n * n);
            for x in 0..n {
                for y in 0..n {
                    out.push(c.kappa.iter().fold(c.offset[j], |s, ((a, b), k)| {
                        let w = binom_wrapped(x as i128, *a as usize).wrapping_mul(binom_wrapped(y as i128, *b as usize));
                        s + k[j].mul_wrapped(w)
                    }));
                }
            }
            out
        })
        .collect();
    let mut chars = Vec::new();
    let mut m = vec![-radius; r];
    loop {
        if sign(&m) > 0 {
            chars.push(m.clone());
        }
        if !odometer(&mut m, radius) {
            break;
        }
    }
    Ok(chars
        .into_par_iter()
        .map(|m| {
            let vals = (0..n * n).map(|p| m.iter().zip(&phi).fold(Phase::ZERO, |s, (&v, ph)| s + ph[p].mul_int(v as i128)).e());
            let avg = (kahan_sum(vals) / (n * n) as f64).norm();
            (m, avg)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::progression::Progression;
    use crate::weyl::{closure_subspaces, PolySequence, WeylSystem};

    #[test]
    fn fast_and_direct_agree() {
        let p = Progression::from_int_coeffs(&[&[0, 1], &[0, 2], &[0, 0, 1]]).unwrap();
        let z = SymReal::zero;
        let seq = PolySequence::new(vec![
            vec![SymReal::sqrt(7), z()],
            vec![SymReal::sqrt(2), z()],
            vec![z(), SymReal::parse("sqrt(2) + 1/3").unwrap()],
        ])
        .unwrap();
        let c = closure_subspaces(&p, &seq, &[]).unwrap();
        let coords_fast = equidistribution_test(&c, 60, 1).unwrap();
        assert!(coords_fast.fast_path);
        let (basis, _) = choose_basis(&c);
        let mut kappa = Vec::new();
        for (mono, v) in &c.monomials {
            kappa.push((*mono, sym_coordinates(&basis, v).unwrap().iter().map(SymReal::phase).collect::<Vec<_>>()));
        }
        let offset = sym_coordinates(&basis, &c.offset).unwrap().iter().map(SymReal::phase).collect();
        let coords = Coords { kappa, offset, r: basis.len() };
        let mut direct = direct_path(&coords, 60, 1).unwrap();
        let mut fast: Vec<(Vec<i64>, f64)> = fast_path(&coords, 60, 1)
            .into_iter()
            .map(|(m, v)| if sign(&m) < 0 { (m.iter().map(|x| -x).collect(), v) } else { (m, v) })
            .collect();
        direct.sort_by(|a, b| a.0.cmp(&b.0));
        fast.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(direct.len(), fast.len());
        assert_eq!(direct.len(), (3usize.pow(7) - 1) / 2);
        for ((ma, a), (mb, b)) in direct.iter().zip(&fast) {
            assert_eq!(ma, mb);
            assert!((a - b).abs() < 1e-9, "{:?}: {} vs {}", ma, a, b);
        }
        // The character dual to v13 + v24, tripled, sees the 1/3 translates.
        let top = coords_fast.annihilating.iter().map(|r| (r.predicted - r.observed).abs()).fold(0.0, f64::max);
        assert!(top < 0.05);
    }

    #[test]
    fn homogeneous_small_radius() {
        let p = Progression::from_int_coeffs(&[&[0, 1], &[0, 2], &[0, 0, 0, 1]]).unwrap();
        let w = WeylSystem::new(SymReal::sqrt(2), vec![SymReal::sqrt(3), SymReal::sqrt(5)]).unwrap();
        let c = closure_subspaces(&p, w.sequence(), &[]).unwrap();
        let rep = equidistribution_test(&c, 400, 1).unwrap();
        assert!(rep.annihilating.is_empty());
        assert_eq!(rep.coordinates, "tau-blocks");
        assert!(rep.max_nonannihilating < 0.2, "{:?}", rep.worst);
    }
}
