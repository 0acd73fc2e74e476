//! Certified complex roots of integer polynomials and Weil height bounds.
//!
//! Roots of each square-free factor are approximated by Aberth iteration,
//! first in f64 and then at the working precision. Each approximation `z_i`
//! gets the inclusion radius `d |f(z_i)| / |lc * prod_{j != i} (z_i - z_j)|`;
//! when these disks are pairwise disjoint every disk holds exactly one root.
//! Multiplicities come from the exact square-free decomposition.

use crate::ball::{CBall, Cx, Dyadic, Round};
use crate::error::{Error, Result};
use crate::interval::{ln_bigint, Interval};
use crate::intpoly::{squarefree_decomposition, IntPolynomial};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub const DEFAULT_PRECISION_CEILING: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    Yes,
    No,
    Undecided,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootCluster {
    pub re: Dyadic,
    pub im: Dyadic,
    pub radius: Dyadic,
    pub multiplicity: usize,
    pub is_real: Tri,
    /// Index of the square-free factor this root belongs to.
    pub factor: usize,
}

impl RootCluster {
    /// Rectangle containing the disk.
    pub fn ball(&self) -> CBall {
        let re = crate::ball::Ball::with_rad(self.re.clone(), self.radius.clone());
        let im = if self.is_real == Tri::Yes {
            crate::ball::Ball::zero()
        } else {
            crate::ball::Ball::with_rad(self.im.clone(), self.radius.clone())
        };
        CBall { re, im }
    }

    pub fn center_f64(&self) -> Complex64 {
        let im = if self.is_real == Tri::Yes { 0.0 } else { self.im.to_f64(Round::Nearest) };
        Complex64::new(self.re.to_f64(Round::Nearest), im)
    }

    fn center_abs(&self, mode: Round) -> Dyadic {
        if self.is_real == Tri::Yes {
            return self.re.abs();
        }
        self.re.mul(&self.re).add(&self.im.mul(&self.im)).sqrt(64, mode)
    }

    pub fn modulus_upper(&self) -> Dyadic {
        self.center_abs(Round::Up).add(&self.radius)
    }

    pub fn modulus_lower(&self) -> Dyadic {
        let d = self.center_abs(Round::Down).sub(&self.radius);
        if d.is_negative() {
            Dyadic::zero()
        } else {
            d
        }
    }

    /// Enclosure of |alpha|.
    pub fn modulus(&self) -> Interval {
        Interval::new(self.modulus_lower().to_f64(Round::Down), self.modulus_upper().to_f64(Round::Up))
    }

    /// Enclosure of log|alpha|; requires the disk to avoid 0.
    pub fn ln_modulus(&self) -> Option<Interval> {
        let lo = self.modulus_lower();
        if lo.is_zero() {
            return None;
        }
        Some(Interval::new(lo.ln_interval().lo, self.modulus_upper().ln_interval().hi))
    }

    fn disjoint_from(&self, re: &Dyadic, im: &Dyadic, r: &Dyadic) -> bool {
        let dr = self.re.sub(re);
        let di = self.im.sub(im);
        let dist = dr.mul(&dr).add(&di.mul(&di)).sqrt(64, Round::Down);
        dist > self.radius.add(r)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeightBound {
    pub value: f64,
}

impl HeightBound {
    pub fn is_upper_bound(&self) -> bool {
        true
    }
}

fn f64_coeffs(f: &IntPolynomial) -> Option<Vec<f64>> {
    let v: Option<Vec<f64>> = f.coeffs().iter().map(|c| c.to_f64()).collect();
    v.filter(|v| v.iter().all(|x| x.is_finite() && x.abs() < 1e250))
}

fn horner_c64(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn initial_circle(c: &[f64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let lc = c[d].abs();
    let r = 1.0 + c[..d].iter().map(|x| x.abs() / lc).fold(0.0, f64::max);
    let r = r.min(1e200);
    (0..d)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
            Complex64::from_polar(r * 0.5, t)
        })
        .collect()
}

fn aberth_f64(f: &IntPolynomial) -> Option<Vec<Complex64>> {
    let c = f64_coeffs(f)?;
    let mut z = initial_circle(&c);
    let d = z.len();
    for _ in 0..800 {
        let mut worst: f64 = 0.0;
        for i in 0..d {
            let (p, dp) = horner_c64(&c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let n = p / dp;
            let s: Complex64 = (0..d).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = n / (Complex64::new(1.0, 0.0) - n * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                return None;
            }
            z[i] -= w;
            worst = worst.max(w.norm() / z[i].norm().max(1.0));
        }
        if worst < 1e-15 {
            break;
        }
    }
    z.iter().all(|x| x.re.is_finite() && x.im.is_finite()).then_some(z)
}

fn horner_cx(f: &IntPolynomial, z: &Cx, prec: u64) -> (Cx, Cx) {
    let mut p = Cx::zero();
    let mut dp = Cx::zero();
    for a in f.coeffs().iter().rev() {
        dp = dp.mul(z, prec).add(&p, prec);
        p = p.mul(z, prec).add(&Cx::new(Dyadic::from_int(a.clone()), Dyadic::zero()), prec);
    }
    (p, dp)
}

/// One Aberth sweep; returns log2 of the largest relative correction.
fn aberth_sweep(f: &IntPolynomial, z: &mut [Cx], prec: u64) -> f64 {
    let d = z.len();
    let one = Cx::new(Dyadic::from_int(1), Dyadic::zero());
    let mut worst = f64::NEG_INFINITY;
    for i in 0..d {
        let (p, dp) = horner_cx(f, &z[i], prec);
        if p.re.is_zero() && p.im.is_zero() {
            continue;
        }
        let n = match p.div(&dp, prec) {
            Some(n) => n,
            None => {
                z[i] = z[i].add(&Cx::new(Dyadic::pow2(-(prec as i64) / 4), Dyadic::pow2(-(prec as i64) / 3)), prec);
                worst = f64::INFINITY;
                continue;
            }
        };
        let mut s = Cx::zero();
        for j in 0..d {
            if j != i {
                if let Some(t) = one.div(&z[i].sub(&z[j], prec), prec) {
                    s = s.add(&t, prec);
                }
            }
        }
        let den = one.sub(&n.mul(&s, prec), prec);
        let w = n.div(&den, prec).unwrap_or(n);
        z[i] = z[i].sub(&w, prec);
        let wm = crate::ball::log2_abs(&w.norm_sqr()) / 2.0;
        let zm = (crate::ball::log2_abs(&z[i].norm_sqr()) / 2.0).max(0.0);
        worst = worst.max(wm - zm);
    }
    worst
}

fn eval_cball(f: &IntPolynomial, z: &CBall, prec: u64) -> CBall {
    let mut acc = CBall::from_int(0);
    for a in f.coeffs().iter().rev() {
        acc = acc.mul(z, prec).add(&CBall::from_int(a.clone()), prec);
    }
    acc
}

/// Weierstrass inclusion radii for the approximations `z`.
fn inclusion_radii(f: &IntPolynomial, z: &[Cx], prec: u64) -> Option<Vec<Dyadic>> {
    let d = z.len();
    let lc = Dyadic::from_int(f.lead().abs());
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        let v = eval_cball(f, &z[i].to_cball(), prec + 32).abs_upper();
        let mut den = lc.clone();
        for j in 0..d {
            if j == i {
                continue;
            }
            let dr = z[i].re.sub(&z[j].re);
            let di = z[i].im.sub(&z[j].im);
            let dist = dr.mul(&dr).add(&di.mul(&di)).sqrt(64, Round::Down);
            if dist.is_zero() {
                return None;
            }
            den = den.mul(&dist).round(64, Round::Down);
        }
        let r = v.mul(&Dyadic::from_int(d as u64)).div(&den, 64, Round::Up);
        out.push(r);
    }
    Some(out)
}

struct FactorState {
    poly: IntPolynomial,
    multiplicity: usize,
    z: Vec<Cx>,
}

fn classify_real(clusters: &mut [RootCluster]) {
    let n = clusters.len();
    for i in 0..n {
        if clusters[i].is_real == Tri::Yes {
            continue;
        }
        if clusters[i].im.abs() > clusters[i].radius {
            clusters[i].is_real = Tri::No;
            continue;
        }
        let (re, im, r) = (clusters[i].re.clone(), clusters[i].im.neg(), clusters[i].radius.clone());
        let alone = (0..n).filter(|&j| j != i).all(|j| clusters[j].disjoint_from(&re, &im, &r));
        if alone {
            clusters[i].is_real = Tri::Yes;
        } else {
            clusters[i].is_real = Tri::Undecided;
        }
    }
}

/// Certified roots with the default precision ceiling.
pub fn certified_roots(g: &IntPolynomial, precision: u64) -> Result<Vec<RootCluster>> {
    certified_roots_with(g, precision, DEFAULT_PRECISION_CEILING)
}

/// Certified roots, doubling the working precision up to `ceiling` bits.
pub fn certified_roots_with(g: &IntPolynomial, precision: u64, ceiling: u64) -> Result<Vec<RootCluster>> {
    if g.is_zero() || g.deg() == 0 {
        return Err(Error::Domain("root isolation needs degree at least 1".into()));
    }
    let precision = precision.max(64);
    let ceiling = ceiling.max(2 * precision);
    let dec = squarefree_decomposition(g)?;
    let mut states: Vec<FactorState> = dec
        .factors
        .iter()
        .map(|(f, l)| {
            let z = if f.deg() == 1 {
                Vec::new()
            } else {
                let approx = aberth_f64(f).unwrap_or_else(|| {
                    let c: Vec<f64> = vec![1.0; f.deg() + 1];
                    initial_circle(&c)
                });
                approx.iter().map(|c| Cx::from_f64(c.re, c.im)).collect()
            };
            FactorState { poly: f.clone(), multiplicity: *l, z }
        })
        .collect();

    let mut p = precision;
    let mut last_detail = String::new();
    loop {
        let mut clusters = Vec::new();
        let mut ok = true;
        for (fi, st) in states.iter_mut().enumerate() {
            if st.poly.deg() == 1 {
                let q = BigRational::new(-st.poly.coeff(0), st.poly.coeff(1));
                let b = crate::ball::Ball::from_rational(&q, p);
                let exact = q.is_integer();
                clusters.push(RootCluster {
                    re: if exact { Dyadic::from_int(q.to_integer()) } else { b.mid },
                    im: Dyadic::zero(),
                    radius: if exact { Dyadic::zero() } else { b.rad },
                    multiplicity: st.multiplicity,
                    is_real: Tri::Yes,
                    factor: fi,
                });
                continue;
            }
            for _ in 0..200 {
                let w = aberth_sweep(&st.poly, &mut st.z, p + 16);
                if w < -(p as f64) + 8.0 {
                    break;
                }
            }
            match inclusion_radii(&st.poly, &st.z, p) {
                Some(r) => {
                    for (z, r) in st.z.iter().zip(r) {
                        clusters.push(RootCluster {
                            re: z.re.clone(),
                            im: z.im.clone(),
                            radius: r,
                            multiplicity: st.multiplicity,
                            is_real: Tri::Undecided,
                            factor: fi,
                        });
                    }
                }
                None => {
                    ok = false;
                    last_detail = "coincident approximations".into();
                }
            }
        }
        if ok {
            'check: for i in 0..clusters.len() {
                for j in i + 1..clusters.len() {
                    let (re, im, r) = (&clusters[j].re, &clusters[j].im, &clusters[j].radius);
                    if !clusters[i].disjoint_from(re, im, r) {
                        ok = false;
                        last_detail = format!("disks {i} and {j} overlap");
                        break 'check;
                    }
                }
            }
        }
        if ok {
            let target = -(precision as i64) / 2;
            let small = clusters.iter().all(|c| {
                let scale = c.re.mag_exp().max(c.im.mag_exp()).max(0);
                c.radius.is_zero() || c.radius.mag_exp() <= target + scale
            });
            classify_real(&mut clusters);
            let undecided = clusters.iter().any(|c| c.is_real == Tri::Undecided);
            if small && (!undecided || p >= ceiling) {
                return Ok(clusters);
            }
        }
        if p >= ceiling {
            return Err(Error::UndecidedClustering { precision: p, detail: last_detail });
        }
        p = (2 * p).min(ceiling);
    }
}

/// Enclosure of the largest modulus and the clusters that may attain it.
pub fn max_modulus(roots: &[RootCluster]) -> (Interval, Vec<usize>) {
    assert!(!roots.is_empty(), "max_modulus of an empty root list");
    let mods: Vec<Interval> = roots.iter().map(|c| c.modulus()).collect();
    let lo = mods.iter().map(|m| m.lo).fold(f64::NEG_INFINITY, f64::max);
    let hi = mods.iter().map(|m| m.hi).fold(f64::NEG_INFINITY, f64::max);
    let att = (0..roots.len()).filter(|&i| mods[i].hi >= lo).collect();
    (Interval::new(lo, hi), att)
}

/// Upper bound on log M(g).
pub fn mahler_measure_upper(g: &IntPolynomial) -> Result<HeightBound> {
    if g.is_zero() {
        return Err(Error::Domain("Mahler measure of the zero polynomial".into()));
    }
    let mut acc = ln_bigint(&g.lead().abs());
    if g.deg() > 0 {
        for c in certified_roots(g, 128)? {
            let m = c.modulus_upper().to_f64(Round::Up);
            if m > 1.0 {
                let l = Interval::point(m).ln();
                acc = acc + Interval::new(l.lo, l.hi).scale(c.multiplicity as f64);
            }
        }
    }
    Ok(HeightBound { value: acc.hi.max(0.0) })
}

/// Exact Weil height of a non-zero rational, rounded up.
pub fn rational_height(q: &BigRational) -> Result<HeightBound> {
    if q.is_zero() {
        return Err(Error::Domain("height of zero".into()));
    }
    let m = q.numer().abs().max(q.denom().abs());
    if m == BigInt::from(1) {
        return Ok(HeightBound { value: 0.0 });
    }
    Ok(HeightBound { value: ln_bigint(&m).hi })
}
