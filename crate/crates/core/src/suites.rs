//! The acceptance criteria as runnable checks, shared by the `acceptance`
//! test target and the `check` command.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::cohom::{decategorification_check, koszul_inverse_check, stable_homology_table, GradedWeightedSpace};
use crate::error::Result;
use crate::ffield::{
    count_smooth_sections_p1, density_report, point_count_square, truncated_ie_discriminant, vw_inversion_check, Line,
};
use crate::homology::{nerve_betti, nonzero, rank_e1_report};
use crate::incidence::{mobius_by_inversion, mobius_topological, Incidence};
use crate::motivic::{kapranov_zeta, mu_terms_gamma, CellularVariety};
use crate::poset::families::{
    antichain, boolean, chain, cone, configuration, cover, divisors, fibered_union, random, symmetric, Multiset,
};
use crate::poset::FinitePoset;
use crate::zerocycles::{lemma_check, letters, punctual_graded_check, skeletal_compare};

#[derive(Debug, Clone)]
pub struct Verdict {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl Verdict {
    pub fn within_limit(&self) -> bool {
        self.limit.is_none_or(|l| self.elapsed <= l)
    }

    pub fn ok(&self) -> bool {
        self.passed && self.within_limit()
    }

    pub fn line(&self) -> String {
        let limit = self.limit.map_or(String::new(), |l| format!(" / limit {}s", l.as_secs()));
        let status = if self.ok() { "PASS" } else { "FAIL" };
        let slow = if self.within_limit() { "" } else { " [over time limit]" };
        format!(
            "[{status}] {:02} {:<20} {:>8.3}s{limit}{slow}  {}",
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

type Check = fn() -> Result<(bool, String)>;

/// `(id, name, time limit in seconds, check)`.
pub const SUITES: &[(u8, &str, Option<u64>, Check)] = &[
    (1, "mobius-agreement", Some(10), mobius_agreement),
    (2, "mobius-inversion", None, mobius_inversion),
    (3, "centers", None, centers),
    (4, "retractions", None, retractions),
    (5, "rank-ss", Some(30), rank_ss),
    (6, "punctual", None, punctual),
    (7, "skeletal", Some(60), skeletal),
    (8, "series", None, series),
    (9, "koszul", None, koszul),
    (10, "point-counts", Some(60), point_counts),
    (11, "vw", None, vw),
    (12, "densities", Some(120), densities),
    (13, "truncated-ie", None, truncated_ie),
    (14, "stable-betti", Some(5), stable_betti),
];

pub fn names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.1).collect()
}

/// Runs one suite by name; `None` for an unknown name.
pub fn run(name: &str) -> Option<Verdict> {
    let &(id, name, limit, check) = SUITES.iter().find(|s| s.1 == name)?;
    let start = Instant::now();
    let (passed, detail) = match check() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Some(Verdict { id, name, passed, detail, elapsed: start.elapsed(), limit: limit.map(Duration::from_secs) })
}

pub fn run_all() -> Vec<Verdict> {
    SUITES.iter().map(|s| run(s.1).expect("registered")).collect()
}

/// Boolean lattices, divisor posets, multiset posets and seeded random posets.
pub fn standard_corpus() -> Result<Vec<(String, FinitePoset)>> {
    let mut out = Vec::new();
    for n in 2..=5 {
        out.push((format!("B{n}"), boolean(n)?));
    }
    for n in [12, 30, 60, 360] {
        out.push((format!("div({n})"), divisors(n)?));
    }
    for m in 1..=3 {
        for k in 1..=4 {
            out.push((format!("S<={k}({m})"), symmetric(&letters(m), k, false)?));
        }
    }
    out.extend(random_corpus(200)?);
    Ok(out)
}

pub fn random_corpus(count: u64) -> Result<Vec<(String, FinitePoset)>> {
    const PROBS: [f64; 4] = [0.2, 0.35, 0.5, 0.7];
    (0..count)
        .map(|seed| {
            let n = 1 + (seed % 10) as usize;
            let p = PROBS[(seed / 10 % 4) as usize];
            Ok((format!("random(n={n}, p={p}, seed={seed})"), random(n, p, seed)?))
        })
        .collect()
}

fn fail_list(failures: &[String]) -> String {
    let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
    format!("{} failures, e.g. {}", failures.len(), shown.join("; "))
}

fn verdict(checked: usize, what: &str, failures: Vec<String>) -> (bool, String) {
    if failures.is_empty() {
        (true, format!("{checked} {what}"))
    } else {
        (false, fail_list(&failures))
    }
}

fn mobius_agreement() -> Result<(bool, String)> {
    let corpus = standard_corpus()?;
    let failures: Vec<String> = corpus
        .par_iter()
        .filter(|(_, p)| mobius_by_inversion::<BigInt>(p) != mobius_topological(p))
        .map(|(name, _)| name.clone())
        .collect();
    Ok(verdict(corpus.len(), "posets, both routes agree", failures))
}

fn mobius_inversion() -> Result<(bool, String)> {
    let corpus = standard_corpus()?;
    let failures: Vec<String> = corpus
        .par_iter()
        .filter(|(_, p)| {
            let mu = mobius_by_inversion::<BigInt>(p);
            let z = Incidence::zeta(p);
            let delta = Incidence::delta(p);
            mu.convolve(&z).ok() != Some(delta.clone()) || z.convolve(&mu).ok() != Some(delta)
        })
        .map(|(name, _)| name.clone())
        .collect();
    Ok(verdict(corpus.len(), "posets with mu*zeta = zeta*mu = delta", failures))
}

fn fibered_corpus() -> Result<Vec<(String, FinitePoset)>> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let mut out = vec![
        ("cover{ab,bc}".to_string(), cover(&[s(&["a", "b"]), s(&["b", "c"])])?),
        ("cover{ab,bc,ca}".to_string(), cover(&[s(&["a", "b"]), s(&["b", "c"]), s(&["c", "a"])])?),
        ("cover{abc,cd,d}".to_string(), cover(&[s(&["a", "b", "c"]), s(&["c", "d"]), s(&["d"])])?),
        ("cover{a,ab,abc,abcd}".to_string(), cover(&[s(&["a"]), s(&["a", "b"]), s(&["a", "b", "c"]), s(&["a", "b", "c", "d"])])?),
        (
            "B3 | div(12) | antichain(2)".to_string(),
            fibered_union(&[("x".into(), boolean(3)?), ("y".into(), divisors(12)?), ("z".into(), antichain(2)?)])?,
        ),
    ];
    for (name, p) in random_corpus(20)? {
        out.push((format!("{name} | cone"), fibered_union(&[("u".into(), p.clone()), ("v".into(), cone(&p)?)])?));
    }
    Ok(out)
}

fn centers() -> Result<(bool, String)> {
    let mut corpus = standard_corpus()?;
    for (name, p) in random_corpus(50)? {
        corpus.push((format!("cone {name}"), cone(&p)?));
    }
    let mut failures = Vec::new();
    let mut with_center = 0;
    for (name, p) in &corpus {
        if p.find_center().is_none() {
            continue;
        }
        with_center += 1;
        if !nonzero(&nerve_betti(p, true)).is_empty() || p.euler_characteristics().0 != 1 {
            failures.push(name.clone());
        }
    }
    let mut fibers = 0;
    for (name, p) in fibered_corpus()? {
        let centers = p.fiber_centers();
        for f in centers.centers.keys() {
            fibers += 1;
            if p.fiber(f).euler_characteristics().0 != 1 {
                failures.push(format!("{name} fiber {f}"));
            }
        }
    }
    Ok(verdict(with_center, &format!("posets with a center contractible; {fibers} centered fibers have chi = 1"), failures))
}

fn same_topology(a: &FinitePoset, b: &FinitePoset) -> bool {
    nonzero(&nerve_betti(a, false)) == nonzero(&nerve_betti(b, false)) && a.euler_characteristics() == b.euler_characteristics()
}

fn retractions() -> Result<(bool, String)> {
    let mut failures = Vec::new();
    let mut support = 0;
    for m in 1..=3 {
        for k in 1..=4 {
            let s = symmetric(&letters(m), k, false)?;
            let c = configuration(&letters(m), Some(k))?;
            match s.falling_retraction(&c)? {
                Some(_) if same_topology(&s, &c) => support += 1,
                Some(_) => failures.push(format!("S<={k} -> C<={k} on {m} letters: topology differs")),
                None => failures.push(format!("S<={k} -> C<={k} on {m} letters: no retraction")),
            }
        }
    }
    // every one-element deletion and every down-set of the random corpus
    let mut found = 0;
    for (name, p) in random_corpus(200)? {
        let mut subs: Vec<Vec<usize>> = (0..p.len()).map(|x| (0..p.len()).filter(|&y| y != x).collect()).collect();
        subs.extend((0..p.len()).map(|x| p.below(x).collect()));
        for keep in subs.into_iter().filter(|k| !k.is_empty()) {
            let sub = p.induced(&keep);
            if p.falling_retraction(&sub)?.is_some() {
                found += 1;
                if !same_topology(&p, &sub) {
                    failures.push(format!("{name} onto {:?}", sub.ids()));
                }
            }
        }
    }
    Ok(verdict(found + support, &format!("falling retractions preserve homology ({support} support retractions)"), failures))
}

fn rank_ss() -> Result<(bool, String)> {
    let mut cases: Vec<(String, FinitePoset)> = vec![
        ("C({0,1,2})".into(), configuration(&["0".into(), "1".into(), "2".into()], None)?),
        ("S<=3({x,y})+".into(), symmetric(&["x".into(), "y".into()], 3, true)?),
    ];
    for n in 1..=6 {
        cases.push((format!("chain({n})"), chain(n)?));
    }
    for m in 1..=4 {
        cases.push((format!("cone antichain({m})"), cone(&antichain(m)?)?));
    }
    cases.extend(random_corpus(50)?);
    let mut failures = Vec::new();
    for (name, p) in &cases {
        if !rank_e1_report(p)?.passes() {
            failures.push(name.clone());
        }
    }
    Ok(verdict(cases.len(), "ranked posets: E1 matches intervals, limit matches homology", failures))
}

fn punctual() -> Result<(bool, String)> {
    let mut failures = Vec::new();
    let mut n = 0;
    for m in 1..=4 {
        for t in Multiset::all_up_to(m, 4) {
            n += 1;
            if !punctual_graded_check(&t, m)?.passes {
                failures.push(format!("{} over {m} letters", t.label(&letters(m))));
            }
        }
    }
    Ok(verdict(n, "multisets checked", failures))
}

fn skeletal() -> Result<(bool, String)> {
    let mut failures = Vec::new();
    let mut n = 0;
    for m in 1..=3 {
        for k in 1..=4 {
            n += 1;
            let (e, r) = skeletal_compare(m, k)?;
            if !(e.d_squared_zero() && e.is_filtered() && r.filtered_quasi_iso() && e.euler_matches_series_inverse()?) {
                failures.push(format!("|Z|={m} k={k}"));
            }
        }
    }
    for p in 0..=4 {
        let l = lemma_check(p);
        if !l.holds() {
            failures.push(format!("lemma p={p}: {} of {} cases fail", l.failures.len(), l.cases));
        }
    }
    Ok(verdict(n, "alphabet/cutoff pairs filtered quasi-isomorphic; permutation identity holds for p <= 4", failures))
}

fn series_varieties() -> Vec<(&'static str, CellularVariety)> {
    vec![
        ("pt", CellularVariety::point()),
        ("A1", CellularVariety::affine(1)),
        ("P1", CellularVariety::projective(1)),
        ("P2", CellularVariety::projective(2)),
        ("P3", CellularVariety::projective(3)),
        ("P1xP1", CellularVariety::projective(1).product(&CellularVariety::projective(1))),
    ]
}

fn series() -> Result<(bool, String)> {
    let mut failures = Vec::new();
    for (name, x) in series_varieties() {
        let z = kapranov_zeta(&x, 10);
        let inv = z.invert()?;
        if inv.mul(&z) != crate::motivic::MotSeries::one(10) || z.mul(&inv) != crate::motivic::MotSeries::one(10) {
            failures.push(format!("{name}: zeta * inverse != 1"));
        }
        for k in 1..=8 {
            if &mu_terms_gamma(&x, k)? != inv.coeff(k) {
                failures.push(format!("{name}: composition sum differs at t^{k}"));
            }
        }
    }
    Ok(verdict(6, "varieties: inverse to t^10, composition sums to t^8", failures))
}

/// Every table with classes in degrees `0..=6` (weight = degree) and total
/// dimension at most 8.
pub fn koszul_corpus() -> Vec<GradedWeightedSpace> {
    fn go(deg: i64, left: u64, cur: &mut Vec<(i64, u64)>, out: &mut Vec<GradedWeightedSpace>) {
        if deg > 6 {
            out.push(GradedWeightedSpace::pure(cur.iter().copied()));
            return;
        }
        for n in 0..=left {
            cur.push((deg, n));
            go(deg + 1, left - n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, 8, &mut Vec::new(), &mut out);
    out
}

fn koszul() -> Result<(bool, String)> {
    let corpus = koszul_corpus();
    let odd = corpus.iter().filter(|v| v.dims().keys().any(|(d, _)| d % 2 == 1)).count();
    let failures: Vec<String> = corpus
        .par_iter()
        .filter(|v| !koszul_inverse_check(v, 8).passes)
        .map(|v| v.to_json().to_string())
        .collect();
    Ok(verdict(corpus.len(), &format!("tables ({odd} with odd classes) invert to t^8"), failures))
}

fn point_counts() -> Result<(bool, String)> {
    let mut failures = Vec::new();
    for q in [2, 3, 5] {
        for (line, k) in [(Line::Affine, 6), (Line::Projective, 5)] {
            let sq = point_count_square(line, q, k)?;
            if !sq.passes() {
                failures.push(format!("{line:?} q={q}"));
            }
        }
    }
    let c2p1 = point_count_square(Line::Projective, 2, 2)?.config_counts[2];
    let c3a1 = point_count_square(Line::Affine, 2, 3)?.config_counts[3];
    if (c2p1, c3a1) != (4, 4) {
        failures.push(format!("#C2(P1)(F2) = {c2p1}, #C3(A1)(F2) = {c3a1}"));
    }
    Ok(verdict(6, "series/count squares commute; #C2(P1)(F2) = #C3(A1)(F2) = 4", failures))
}

fn vw() -> Result<(bool, String)> {
    let mut failures = Vec::new();
    for q in [2, 3] {
        for n in 0..=4 {
            if !vw_inversion_check(q, n)?.passes {
                failures.push(format!("q={q} N={n}"));
            }
        }
    }
    let r = vw_inversion_check(2, 3)?;
    if r.counts != [1, -2, 0, 0].map(BigInt::from) {
        failures.push("q=2 worked cancellations".into());
    }
    Ok(verdict(10, "(q, N) pairs invert exactly", failures))
}

fn densities() -> Result<(bool, String)> {
    let mut failures = Vec::new();
    for q in [2u64, 3, 5] {
        for d in 3..=7usize {
            let expect = (q - 1) * (q.pow(d as u32) - q.pow(d as u32 - 2));
            let got = count_smooth_sections_p1(q, d)?;
            if got != expect {
                failures.push(format!("q={q} d={d}: {got} != {expect}"));
            }
        }
        let r = density_report(q, 3..=7)?;
        if r.limit != r.motivic_limit || !r.rows.iter().all(|row| row.equals_limit) {
            failures.push(format!("q={q}: density differs from limit"));
        }
    }
    Ok(verdict(15, "(q, d) pairs match the stable count and density", failures))
}

fn truncated_ie() -> Result<(bool, String)> {
    let mut failures = Vec::new();
    let mut n = 0;
    let mut worst = 0f64;
    for q in [2u64, 3] {
        for d in [5usize, 6, 7] {
            for k in [1usize, 2] {
                if d < 2 * k + 1 {
                    continue;
                }
                n += 1;
                let r = truncated_ie_discriminant(q, d, k)?;
                let bound = (q as i128).pow((d - k) as u32);
                worst = worst.max(r.residual.abs() as f64 / bound as f64);
                if r.residual.abs() > bound {
                    failures.push(format!("q={q} d={d} k={k}: residual {}", r.residual));
                }
            }
        }
    }
    Ok(verdict(n, &format!("residuals within q^(d-k) (largest ratio {worst:.3})"), failures))
}

fn stable_betti() -> Result<(bool, String)> {
    let mut failures = Vec::new();
    let p1 = stable_homology_table(&GradedWeightedSpace::of_cellular(&CellularVariety::projective(1)), 4);
    if p1.poincare != [1, 1, 0, 1, 1] {
        failures.push(format!("P1: {}", p1.poincare_string()));
    }
    let p2 = stable_homology_table(&GradedWeightedSpace::of_cellular(&CellularVariety::projective(2)), 6);
    if p2.poincare != [1, 1, 0, 1, 1, 1, 1, 0, 1, 1] {
        failures.push(format!("P2: {}", p2.poincare_string()));
    }
    let proper: Vec<_> = series_varieties().into_iter().filter(|(n, _)| *n != "A1").collect();
    for (name, x) in &proper {
        let (table, limit) = decategorification_check(x)?;
        if table != limit {
            failures.push(format!("{name}: table Euler characteristic {table} != limit {limit}"));
        }
    }
    Ok(verdict(proper.len(), "varieties: weighted Euler characteristic equals the stable limit", failures))
}
