//! Tracing of `{|g| = 1}` (or `{Re h = 0}`) and classification of every
//! traced node plus the refined exceptional points between nodes.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::data::{eval, h_values, WeierstrassData};
use crate::classification::{Classification, CriterionValues, Tag, Tolerances};
use crate::domain::{Grid, Rect};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::numerics::continuation::{self, LevelSample, TraceOptions, TracedCurve};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocusOptions {
    pub grid: Grid,
    /// Upper bound on the continuation step.
    pub max_step: f64,
}

impl LocusOptions {
    pub fn new(grid: Grid) -> LocusOptions {
        LocusOptions { grid, max_step: 0.05 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    #[serde(serialize_with = "pair")]
    pub z: Complex64,
    #[serde(serialize_with = "pair")]
    pub xi: Complex64,
    #[serde(serialize_with = "pair")]
    pub eta: Complex64,
    pub classification: Classification,
    /// Refined zero of `Re α` or `Im α` rather than a continuation node.
    pub special: bool,
}

fn pair<S: serde::Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [c.re, c.im].serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularCurve {
    pub points: Vec<CurvePoint>,
    pub closed: bool,
}

impl SingularCurve {
    /// Length of the polyline through the points.
    pub fn length(&self) -> f64 {
        let p = &self.points;
        let mut len: f64 = p.windows(2).map(|w| (w[1].z - w[0].z).norm()).sum();
        if self.closed && p.len() > 1 {
            len += (p[0].z - p[p.len() - 1].z).norm();
        }
        len
    }

    pub fn count(&self, tag: Tag) -> usize {
        self.points.iter().filter(|p| p.classification.tag == tag).count()
    }
}

/// A singular set given by a level function, with closed-form criteria.
pub(crate) trait SingularSet: Sync {
    fn level(&self, z: Complex64) -> Result<LevelSample>;
    fn values(&self, z: Complex64) -> Result<CriterionValues>;
    /// Singular direction `ξ` and null direction `η`.
    fn directions(&self, z: Complex64) -> Result<(Complex64, Complex64)>;
}

impl SingularSet for WeierstrassData {
    fn level(&self, z: Complex64) -> Result<LevelSample> {
        let j = self.jets(z, 1)?;
        let g = j.g.value();
        let dg = j.g.derivative(1);
        Ok(LevelSample {
            value: g.norm_sqr() - 1.0,
            gradient: g * dg.conj() * 2.0,
            step_hint: 0.5 / (dg / g).norm().max(1.0),
        })
    }

    fn values(&self, z: Complex64) -> Result<CriterionValues> {
        self.criterion_values(z)
    }

    fn directions(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        WeierstrassData::directions(self, z)
    }
}

/// Singular set `{Re h = 0}` of the data `(e^h, 1)`.
pub(crate) struct HSet<'a> {
    pub h: &'a Expr,
}

impl SingularSet for HSet<'_> {
    fn level(&self, z: Complex64) -> Result<LevelSample> {
        let j = eval("h", self.h, z, 1)?;
        let dh = j.derivative(1);
        Ok(LevelSample {
            value: j.value().re,
            gradient: dh.conj(),
            step_hint: 0.5 / dh.norm().max(1.0),
        })
    }

    fn values(&self, z: Complex64) -> Result<CriterionValues> {
        h_values(self.h, z)
    }

    fn directions(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let j = eval("h", self.h, z, 1)?;
        Ok((Complex64::i() * j.derivative(1).conj(), Complex64::i() * (-j.value()).exp()))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Test {
    Re,
    Im,
}

impl Test {
    fn of(self, v: &CriterionValues) -> f64 {
        match self {
            Test::Re => v.alpha.re,
            Test::Im => v.alpha.im,
        }
    }
}

struct Tracer<'a, S: SingularSet> {
    set: &'a S,
    tol: Tolerances,
    opts: TraceOptions,
}

impl<'a, S: SingularSet> Tracer<'a, S> {
    fn level_fn(&self) -> impl Fn(Complex64) -> std::result::Result<LevelSample, String> + '_ {
        move |z| self.set.level(z).map_err(|e| e.to_string())
    }

    fn project(&self, z: Complex64) -> Result<Complex64> {
        Ok(continuation::refine(&self.level_fn(), z, &self.opts)?)
    }

    fn test_at(&self, z: Complex64, test: Test) -> Result<(f64, f64)> {
        let v = self.set.values(z)?;
        Ok((test.of(&v), v.band(self.tol.eps_zero)))
    }

    /// Bisects a sign change of `test` on the chord `a -> b`, projecting
    /// each trial point back onto the curve.
    fn bisect(&self, a: Complex64, b: Complex64, test: Test) -> Result<(f64, Complex64)> {
        let sign_a = self.test_at(a, test)?.0.signum();
        let (mut lo, mut hi) = (0.0, 1.0);
        let len = (b - a).norm();
        while (hi - lo) * len > 1e-15 {
            let mid = 0.5 * (lo + hi);
            let p = self.project(a + (b - a) * mid)?;
            let t = self.test_at(p, test)?.0;
            if t == 0.0 {
                return Ok((mid, p));
            }
            if t.signum() == sign_a {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mid = 0.5 * (lo + hi);
        Ok((mid, self.project(a + (b - a) * mid)?))
    }

    /// Golden-section minimum of `|test|` on the two chords around node `b`.
    fn minimize(&self, a: Complex64, b: Complex64, c: Complex64, test: Test) -> Result<(f64, Complex64, f64, f64)> {
        let point = |s: f64| if s < 0.0 { b + (b - a) * s } else { b + (c - b) * s };
        let eval = |s: f64| -> Result<(Complex64, f64, f64)> {
            let p = self.project(point(s))?;
            let (t, band) = self.test_at(p, test)?;
            Ok((p, t.abs(), band))
        };
        let r = 0.5 * (5f64.sqrt() - 1.0);
        let (mut lo, mut hi) = (-1.0, 1.0);
        let mut x1 = hi - r * (hi - lo);
        let mut x2 = lo + r * (hi - lo);
        let mut f1 = eval(x1)?;
        let mut f2 = eval(x2)?;
        for _ in 0..60 {
            if f1.1 < f2.1 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - r * (hi - lo);
                f1 = eval(x1)?;
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + r * (hi - lo);
                f2 = eval(x2)?;
            }
        }
        let (s, best) = if f1.1 < f2.1 { (x1, f1) } else { (x2, f2) };
        Ok((s, best.0, best.1, best.2))
    }

    fn point(&self, z: Complex64, classification: Classification, special: bool) -> Result<CurvePoint> {
        let (xi, eta) = self.set.directions(z)?;
        Ok(CurvePoint {
            z,
            xi,
            eta,
            classification,
            special,
        })
    }

    /// Classifies a refined zero of `test`, treating the second-order test as
    /// zero when it is small or changes sign while `test` stays in its band.
    fn classify_special(&self, z: Complex64, test: Test) -> Result<Classification> {
        let v = self.set.values(z)?;
        let mut c = v.classify(self.tol.eps_zero);
        if !matches!(c.tag, Tag::Swallowtail | Tag::CuspidalCrossCap) {
            return Ok(c);
        }
        let second = |v: &CriterionValues| {
            v.second.map_or(0.0, |s| match test {
                Test::Im => s.swallowtail,
                Test::Re => s.cross_cap,
            })
        };
        let (xi, _) = self.set.directions(z)?;
        let xi = xi / xi.norm();
        let mut ends = Vec::with_capacity(2);
        for dir in [-1.0, 1.0] {
            let mut delta = 1e-10;
            let mut end = None;
            while delta < 0.05 {
                let p = self.project(z + xi * (dir * delta))?;
                let (t, band) = self.test_at(p, test)?;
                if t.abs() > band {
                    end = Some(self.set.values(p)?);
                    break;
                }
                delta *= 2.0;
            }
            if let Some(e) = end {
                ends.push(e);
            }
        }
        let centre = second(&v);
        let vanishes = ends.iter().any(|e| {
            let s = second(e);
            s.abs() <= e.band(self.tol.eps_zero) || s.signum() != centre.signum()
        });
        if vanishes {
            c.tag = Tag::DegeneratePoint;
        }
        Ok(c)
    }

    fn classify_curve(&self, traced: &TracedCurve) -> Result<SingularCurve> {
        let nodes = &traced.points;
        let n = nodes.len();
        let values: Vec<CriterionValues> = nodes.par_iter().map(|&z| self.set.values(z)).collect::<Result<_>>()?;
        let band = |i: usize| values[i].band(self.tol.eps_zero);
        let segments = if traced.closed { n } else { n.saturating_sub(1) };

        // (position, point, vanishing test)
        let mut candidates: Vec<(f64, Complex64, Test)> = Vec::new();
        let mut in_band = vec![false; n];
        for test in [Test::Re, Test::Im] {
            let t = |i: usize| test.of(&values[i]);
            for i in 0..n {
                if t(i).abs() <= band(i) {
                    candidates.push((i as f64, nodes[i], test));
                    in_band[i] = true;
                }
            }
            for k in 0..segments {
                let (a, b) = (k, (k + 1) % n);
                if t(a).abs() > band(a) && t(b).abs() > band(b) && t(a) * t(b) < 0.0 {
                    let (s, p) = self.bisect(nodes[a], nodes[b], test)?;
                    candidates.push((k as f64 + s, p, test));
                }
            }
            for i in 0..n {
                let (Some(a), Some(c)) = (prev(i, n, traced.closed), next(i, n, traced.closed)) else {
                    continue;
                };
                let (ta, tb, tc) = (t(a), t(i), t(c));
                let same_sign = ta * tb > 0.0 && tb * tc > 0.0;
                if same_sign && tb.abs() < ta.abs() && tb.abs() < tc.abs() && tb.abs() > band(i) {
                    let (s, p, value, b) = self.minimize(nodes[a], nodes[i], nodes[c], test)?;
                    if value <= b {
                        candidates.push((i as f64 + s, p, test));
                    }
                }
            }
        }

        let mut specials: Vec<(f64, CurvePoint)> = Vec::new();
        let classified: Vec<(f64, Complex64, Classification)> = candidates
            .par_iter()
            .map(|&(pos, z, test)| Ok((pos, z, self.classify_special(z, test)?)))
            .collect::<Result<_>>()?;
        for (pos, z, c) in classified {
            if specials.iter().any(|(_, s)| (s.z - z).norm() <= 1e-9) {
                continue;
            }
            specials.push((pos, self.point(z, c, true)?));
        }

        let mut all: Vec<(f64, CurvePoint)> = specials.clone();
        for i in 0..n {
            if in_band[i] || specials.iter().any(|(_, s)| (s.z - nodes[i]).norm() <= 1e-7) {
                continue;
            }
            let c = values[i].classify(self.tol.eps_zero);
            all.push((i as f64, self.point(nodes[i], c, false)?));
        }
        all.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(SingularCurve {
            points: all.into_iter().map(|(_, p)| p).collect(),
            closed: traced.closed,
        })
    }
}

fn prev(i: usize, n: usize, closed: bool) -> Option<usize> {
    match (i, closed) {
        (0, true) if n > 2 => Some(n - 1),
        (0, _) => None,
        _ => Some(i - 1),
    }
}

fn next(i: usize, n: usize, closed: bool) -> Option<usize> {
    match (i + 1 == n, closed) {
        (true, true) if n > 2 => Some(0),
        (true, _) => None,
        _ => Some(i + 1),
    }
}

pub(crate) fn locus<S: SingularSet>(set: &S, domain: &Rect, opts: &LocusOptions, tol: &Tolerances) -> Result<Vec<SingularCurve>> {
    if opts.grid.nu < 16 || opts.grid.nv < 16 {
        return Err(Error::Invalid(format!(
            "locus grid must be at least 16x16, got {}x{}",
            opts.grid.nu, opts.grid.nv
        )));
    }
    if !(opts.max_step > 0.0) {
        return Err(Error::Invalid("continuation step must be positive".into()));
    }
    let tracer = Tracer {
        set,
        tol: *tol,
        opts: TraceOptions {
            eps: tol.eps_curve,
            max_step: opts.max_step,
            ..TraceOptions::default()
        },
    };
    let traced = continuation::trace_all(&tracer.level_fn(), domain, opts.grid, &tracer.opts)?;
    traced.iter().map(|c| tracer.classify_curve(c)).collect()
}

impl WeierstrassData {
    /// Traces and classifies `{|g| = 1}` with the default step bound.
    pub fn singular_locus(&self, grid: Grid, tol: &Tolerances) -> Result<Vec<SingularCurve>> {
        self.singular_locus_with(&LocusOptions::new(grid), tol)
    }

    pub fn singular_locus_with(&self, opts: &LocusOptions, tol: &Tolerances) -> Result<Vec<SingularCurve>> {
        locus(self, &self.domain, opts, tol)
    }
}

/// Traces and classifies `{Re h = 0}` for the data `(e^h, 1)`.
pub fn singular_locus_h(h: &Expr, domain: &Rect, opts: &LocusOptions, tol: &Tolerances) -> Result<Vec<SingularCurve>> {
    locus(&HSet { h }, domain, opts, tol)
}
