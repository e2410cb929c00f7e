//! The acceptance suite: one line per criterion, shared by `verify-paper`
//! and the acceptance test target.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use eichler_core::classpoly::{hilbert_mod, precompute, resultant_vp};
use eichler_core::correspond::{
    appendix_check, correspondence_table, count_check_with_fibers, default_q, isogeny_action_check,
    sweep_discriminants, sweep_params, CorrespondenceRow,
};
use eichler_core::ec::{
    division_poly, isogeny_count, load_phi3, orientation_disc, oriented_graph, phi_poly, Curve, OrientedGraph, Point,
};
use eichler_core::ff::{factor_fp, roots, Fp2, ModPoly, F2};
use eichler_core::numth::{find_q, kronecker, lift_sqrt_mod_4q, primes_up_to, sqrt_mod_prime};
use eichler_core::qform::{assigned_characters, class_group, compose, form_genus, identity, inverse, reduce};
use eichler_core::quat::{
    discriminant, eichler_o, eichler_oprime, embedded_discs, is_order, order_to_form, successive_minima, QuatAlgebra,
    QuatElement,
};
use eichler_core::{BQForm, Error, PrimeParams, Variant};
use petgraph::graph::UnGraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 0xe1c4_1e40;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub p: i64,
    pub c: i64,
    pub seed: u64,
    pub sweep_pmax: i64,
    pub samples: usize,
    pub property_cases: usize,
    pub phi3: Option<PathBuf>,
}

impl SuiteConfig {
    pub fn new(p: i64, c: i64) -> SuiteConfig {
        SuiteConfig { p, c, seed: DEFAULT_SEED, sweep_pmax: 300, samples: 50, property_cases: 500, phi3: None }
    }

    fn is_paper_example(&self) -> bool {
        (self.p, self.c) == (101, 3)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    /// Set when a failure is a reproducible disagreement with a stated
    /// theorem whose corrected form was checked instead.
    pub explained: Option<String>,
    pub seconds: f64,
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {:<28} {:>7.2}s  {}", self.id, self.name, self.seconds, self.detail)?;
        if let Some(e) = &self.explained {
            write!(f, " | {e}")?;
        }
        Ok(())
    }
}

struct Outcome {
    pass: bool,
    detail: String,
    explained: Option<String>,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Outcome {
        Outcome { pass, detail: detail.into(), explained: None }
    }
}

fn timed(id: u8, name: &'static str, budget: Option<Duration>, f: impl FnOnce() -> Result<Outcome, Error>) -> CheckLine {
    let t = Instant::now();
    let out = f().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
    let el = t.elapsed();
    let mut line = CheckLine {
        id,
        name,
        pass: out.pass,
        detail: out.detail,
        explained: out.explained,
        seconds: el.as_secs_f64(),
    };
    if let Some(b) = budget {
        if el > b {
            line.pass = false;
            line.detail += &format!("; over the {}s budget", b.as_secs());
        }
    }
    line
}

/// Run every criterion, reporting each line as it completes.
pub fn run(cfg: &SuiteConfig, mut report: impl FnMut(&CheckLine)) -> Vec<CheckLine> {
    let secs = Duration::from_secs;
    let mut lines = Vec::new();
    let mut push = |l: CheckLine| {
        report(&l);
        lines.push(l);
    };
    push(timed(1, "table reproduction", Some(secs(10)), || criterion_table(cfg)));
    push(timed(2, "class polynomial factors", Some(secs(30)), || criterion_hilbert(cfg)));
    let samples = sample_orders(cfg);
    push(timed(3, "Eichler orders", Some(secs(60)), || criterion_orders(&samples)));
    push(timed(4, "successive minima", Some(secs(300)), || criterion_minima(&samples)));
    // criteria 5 and 6 share the sweep tables; building them counts against 5
    let t = Instant::now();
    let tables = sweep_tables(cfg);
    let build = t.elapsed();
    let mut five = timed(5, "field of definition", Some(secs(600).saturating_sub(build)), || criterion_dichotomy(&tables));
    five.seconds += build.as_secs_f64();
    push(five);
    push(timed(6, "resultant valuation", Some(secs(600)), || criterion_valuation(&tables)));
    push(timed(7, "class counts", None, || criterion_counts(cfg)));
    push(timed(8, "isogeny graph", Some(secs(60)), || criterion_graph(cfg)));
    push(timed(9, "isogeny action", None, || criterion_action(cfg)));
    push(timed(10, "property suites", None, || criterion_properties(cfg)));
    lines
}

struct ExpectedRow {
    variant: Variant,
    order: (i64, i64),
    form: BQForm,
    both: bool,
    js: &'static [(i64, i64)],
}

const EXAMPLE_ROWS: &[ExpectedRow] = &[
    ExpectedRow { variant: Variant::LambdaPrime, order: (1619, 1215), form: BQForm::new(3, 3, 26), both: false, js: &[(66, 0)] },
    ExpectedRow { variant: Variant::LambdaPrime, order: (59, 13), form: BQForm::new(2, 1, 38), both: true, js: &[(21, 0)] },
    ExpectedRow {
        variant: Variant::LambdaPrime,
        order: (11, 7),
        form: BQForm::new(8, 7, 11),
        both: true,
        js: &[(37, 10), (37, -10)],
    },
    ExpectedRow { variant: Variant::Lambda, order: (1619, 1215), form: BQForm::new(3, 0, 404), both: false, js: &[(0, 0)] },
    ExpectedRow { variant: Variant::Lambda, order: (11, 7), form: BQForm::new(11, 6, 111), both: true, js: &[(57, 0)] },
    ExpectedRow {
        variant: Variant::Lambda,
        order: (59, 13),
        form: BQForm::new(32, 12, 39),
        both: true,
        js: &[(37, 10), (37, -10)],
    },
];

fn tables_for(p: i64, c: i64) -> Result<Vec<(PrimeParams, Vec<CorrespondenceRow>)>, Error> {
    let base = PrimeParams::new(p, c, Variant::Lambda)?;
    let mut out = Vec::new();
    for v in [Variant::LambdaPrime, Variant::Lambda] {
        if let Ok(ps) = base.with_variant(v) {
            let q = default_q(&ps)?;
            out.push((ps, correspondence_table(&ps, q)?));
        }
    }
    Ok(out)
}

fn criterion_table(cfg: &SuiteConfig) -> Result<Outcome, Error> {
    let tables = tables_for(cfg.p, cfg.c)?;
    let k = Fp2::new(cfg.p as u64)?;
    if !cfg.is_paper_example() {
        let rows: Vec<_> = tables.iter().flat_map(|(_, r)| r).collect();
        let bad: Vec<_> = rows.iter().filter(|r| r.j_values.is_empty() || !r.roundtrip).map(|r| r.form.to_string()).collect();
        return Ok(Outcome::new(bad.is_empty(), format!("{} rows, {} without a j-invariant or round trip {bad:?}", rows.len(), bad.len())));
    }
    let mut mismatches = Vec::new();
    let mut n = 0;
    for (ps, rows) in &tables {
        if rows.len() != 3 {
            mismatches.push(format!("{:?} has {} rows", ps.variant, rows.len()));
        }
        for e in EXAMPLE_ROWS.iter().filter(|e| e.variant == ps.variant) {
            n += 1;
            let Some(r) = rows.iter().find(|r| r.form == e.form) else {
                mismatches.push(format!("missing {}", e.form));
                continue;
            };
            let mut want: Vec<F2> = e.js.iter().map(|&(u, v)| k.elem(u, v)).collect();
            want.sort();
            if r.both_signs != e.both || r.j_values != want || (r.q, r.r) != e.order {
                mismatches.push(format!("{}: {} ({},{}) {}", r.form_label(), r.order_label(), r.q, r.r, r.j_label()));
            }
        }
    }
    Ok(Outcome::new(mismatches.is_empty() && n == 6, format!("{n} rows checked; mismatches {mismatches:?}")))
}

fn criterion_hilbert(cfg: &SuiteConfig) -> Result<Outcome, Error> {
    let (p, cp) = (cfg.p, cfg.p * cfg.c);
    let k = Fp2::new(p as u64)?;
    let fac = |d: i64| -> Result<BTreeSet<(Vec<F2>, usize)>, Error> {
        Ok(factor_fp(&hilbert_mod(d, p)?).ok_or(Error::BadDisc(d))?.into_iter().map(|(f, e)| (f.c, e)).collect())
    };
    let poly = |c: &[i64]| ModPoly::from_i64(k, c).c;
    if cfg.is_paper_example() {
        let want303: BTreeSet<_> = [(poly(&[35, 1]), 2), (poly(&[80, 1]), 4), (poly(&[54, 27, 1]), 2)].into_iter().collect();
        let want1212: BTreeSet<_> = [(poly(&[0, 1]), 2), (poly(&[44, 1]), 4), (poly(&[54, 27, 1]), 2)].into_iter().collect();
        let (a, b) = (fac(-303)? == want303, fac(-1212)? == want1212);
        return Ok(Outcome::new(a && b, format!("H_-303 {}, H_-1212 {}", ok(a), ok(b))));
    }
    // every root of H_-cp and H_-4cp mod p is a j-value of some table row
    let tables = tables_for(cfg.p, cfg.c)?;
    let js: BTreeSet<F2> = tables.iter().flat_map(|(_, r)| r).flat_map(|r| r.j_values.clone()).collect();
    let mut missing = 0;
    let mut total = 0;
    for d in [-cp, -4 * cp] {
        if d.rem_euclid(4) > 1 {
            continue;
        }
        for j in roots(&hilbert_mod(d, p)?, true) {
            total += 1;
            missing += !js.contains(&j) as usize;
        }
    }
    Ok(Outcome::new(missing == 0, format!("{total} roots of H_-cp, H_-4cp; {missing} not in the table")))
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "MISMATCH"
    }
}

#[derive(Clone, Debug)]
pub struct OrderSample {
    pub params: PrimeParams,
    pub q: i64,
    pub r: i64,
}

/// Seeded (p, c, q, r) samples with p <= sweep_pmax, both families.
pub fn sample_orders(cfg: &SuiteConfig) -> Vec<OrderSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let params = sweep_params(cfg.sweep_pmax);
    let mut out = Vec::new();
    while out.len() < cfg.samples {
        let ps = *params.choose(&mut rng).unwrap();
        let qs = find_q(&ps, 4000);
        let Some(&q) = qs.choose(&mut rng) else { continue };
        let Some(mut r) = sqrt_mod_prime(-ps.cp(), q) else { continue };
        if rng.gen::<bool>() {
            r = (q - r) % q;
        }
        let r = match ps.variant {
            Variant::Lambda => r,
            Variant::LambdaPrime => match lift_sqrt_mod_4q(r, q, ps.cp()) {
                Ok(r) => r,
                Err(_) => continue,
            },
        };
        out.push(OrderSample { params: ps, q, r });
    }
    out
}

fn build(s: &OrderSample) -> Result<eichler_core::quat::QuatOrder, Error> {
    match s.params.variant {
        Variant::Lambda => eichler_o(&s.params, s.q, s.r),
        Variant::LambdaPrime => eichler_oprime(&s.params, s.q, s.r),
    }
}

fn criterion_orders(samples: &[OrderSample]) -> Result<Outcome, Error> {
    let mut bad = Vec::new();
    for s in samples {
        let o = build(s)?;
        let cp = s.params.cp() as i128;
        if !is_order(&o)? || discriminant(&o) != cp * cp {
            bad.push(format!("{:?} q={} r={}", s.params, s.q, s.r));
        }
    }
    let primed = samples.iter().filter(|s| s.params.variant == Variant::LambdaPrime).count();
    Ok(Outcome::new(bad.is_empty(), format!("{} samples ({primed} primed), failures {bad:?}", samples.len())))
}

fn criterion_minima(samples: &[OrderSample]) -> Result<Outcome, Error> {
    let mut checked = 0;
    let mut bad = Vec::new();
    for s in samples {
        let o = build(s)?;
        let f = order_to_form(&o)?;
        let (want, applies) = match s.params.variant {
            Variant::Lambda => ((f.a as i128, f.ap as i128), f.a > 4),
            Variant::LambdaPrime => ((4 * f.a as i128, 4 * f.ap as i128), f.a > 1),
        };
        if !applies {
            continue;
        }
        checked += 1;
        let bound = want.1 + 1;
        let minima = successive_minima(&o, bound);
        // the smallest embedded discriminant is the first minimum
        let first = embedded_discs(&o, bound).first().copied();
        if minima != Some(want) || first != Some(want.0) {
            bad.push(format!("{f}: {minima:?}"));
        }
    }
    Ok(Outcome::new(bad.is_empty(), format!("{checked} samples in range, failures {bad:?}")))
}

type SweepTables = Result<Vec<(PrimeParams, Vec<CorrespondenceRow>)>, Error>;

fn sweep_tables(cfg: &SuiteConfig) -> SweepTables {
    let ps = sweep_params(cfg.sweep_pmax);
    precompute(&sweep_discriminants(&ps)?)?;
    ps.into_iter().map(|p| Ok((p, correspondence_table(&p, default_q(&p)?)?))).collect()
}

/// Any solution of x^2 + a y^2 = m, primitive or not.
fn represents(a: i64, m: i64) -> bool {
    (0..).take_while(|y| a * y * y <= m).any(|y| {
        let t = m - a * y * y;
        let x = (t as f64).sqrt().round() as i64;
        x * x == t
    })
}

fn criterion_dichotomy(tables: &SweepTables) -> Result<Outcome, Error> {
    let tables = tables.as_ref().map_err(Clone::clone)?;
    let k0 = |p: i64| Fp2::new(p as u64).unwrap();
    let (mut rows, mut strict_bad, mut relaxed_bad, mut shape_bad) = (0, 0, 0, Vec::new());
    let mut example = None;
    for (ps, table) in tables {
        let k = k0(ps.p);
        let m = if ps.variant == Variant::Lambda { 4 * ps.c } else { ps.c };
        for r in table {
            rows += 1;
            let shape = match r.j_values.as_slice() {
                [j] => r.gcd_poly.deg() == 1 && j.in_fp(),
                [j1, j2] => r.gcd_poly.deg() == 2 && !j1.in_fp() && k.frob(*j1) == *j2,
                _ => false,
            };
            if !shape {
                shape_bad.push(format!("{:?} {}", ps, r.form));
            }
            if r.in_fp != r.rep_solution.is_some() {
                strict_bad += 1;
                example.get_or_insert(format!("p={} c={} {}", ps.p, ps.c, r.form));
            }
            if r.in_fp != represents(r.form.a, m) {
                relaxed_bad += 1;
            }
        }
    }
    let detail = format!(
        "{rows} rows over {} parameter sets; gcd shape failures {}; in_Fp vs primitive representation: {strict_bad} disagreements (e.g. {})",
        tables.len(),
        shape_bad.len(),
        example.as_deref().unwrap_or("none")
    );
    let mut out = Outcome::new(strict_bad == 0 && relaxed_bad == 0 && shape_bad.is_empty(), detail);
    if strict_bad > 0 && relaxed_bad == 0 && shape_bad.is_empty() {
        out.explained = Some(format!(
            "gcd(x,y)=1 is too strong: in_Fp matches solvability of x^2+ay^2=4c (resp. c) in all {rows} rows"
        ));
    }
    Ok(out)
}

fn criterion_valuation(tables: &SweepTables) -> Result<Outcome, Error> {
    let tables = tables.as_ref().map_err(Clone::clone)?;
    let mut checked = 0;
    let mut bad = Vec::new();
    for (ps, table) in tables {
        for r in table.iter().filter(|r| r.form_order > 2 && r.minima_applies()) {
            checked += 1;
            match resultant_vp(r.d1, r.d2, ps.p) {
                Ok(2) => {}
                v => bad.push(format!("p={} c={} {}: {v:?}", ps.p, ps.c, r.form)),
            }
        }
    }
    Ok(Outcome::new(bad.is_empty(), format!("{checked} rows with v_p = 2 expected, failures {bad:?}")))
}

fn criterion_counts(cfg: &SuiteConfig) -> Result<Outcome, Error> {
    let mut bad = Vec::new();
    let mut n = 0;
    let mut eta_rows = BTreeSet::new();
    for ps in sweep_params(cfg.sweep_pmax) {
        n += 1;
        let rep = count_check_with_fibers(&ps)?;
        if !rep.pass {
            bad.push(format!("{ps:?}"));
        }
        eta_rows.insert((ps.variant == Variant::Lambda, ps.p % 8, ps.c % 8, rep.eta_tabulated));
        let app = appendix_check(&ps)?;
        if !app.pass {
            bad.push(format!("appendix {ps:?}"));
        }
    }
    Ok(Outcome::new(
        bad.is_empty(),
        format!("{n} parameter sets, {} distinct (family, p mod 8, c mod 8, eta) rows; failures {bad:?}", eta_rows.len()),
    ))
}

/// The 2-isogeny diagram of the paper's example, with the j-invariants of
/// its curve table. E_i' carries j(E_i)^p, or j(E_i) itself when `literal`.
fn paper_diagram(k: Fp2, literal: bool) -> (Vec<F2>, Vec<(usize, usize)>, Vec<usize>) {
    let j = |u: i64, v: i64| k.elem(u, v);
    let js = [
        j(66, 0),
        j(37, 10),
        j(37, -10),
        j(21, 0),
        j(21, 0),
        j(0, 0),
        j(57, 0),
        j(57, 0),
        j(37, -10),
        j(37, 10),
    ];
    // E_i is node i-1, E_i' is node i+9
    let (e, ep) = (|i: usize| i - 1, |i: usize| i + 9);
    let edges = vec![
        (e(1), e(6)),
        (e(1), e(2)),
        (e(1), e(3)),
        (e(2), e(7)),
        (e(2), e(4)),
        (e(4), e(9)),
        (e(4), ep(5)),
        (ep(5), ep(10)),
        (ep(5), ep(3)),
        (ep(3), ep(8)),
        (ep(3), ep(1)),
        (ep(1), ep(6)),
        (ep(1), ep(2)),
        (ep(2), ep(7)),
        (ep(2), ep(4)),
        (ep(4), ep(9)),
        (ep(4), e(5)),
        (e(5), e(10)),
        (e(5), e(3)),
        (e(3), e(8)),
    ];
    let primed = js.iter().map(|&j| if literal { j } else { k.frob(j) });
    let labels = js.iter().copied().chain(primed).collect();
    let pairing = (0..20).map(|i| (i + 10) % 20).collect();
    (labels, edges, pairing)
}

/// Is there an isomorphism matching labels and carrying one involution to
/// the other? Pairing edges are added with their own weight.
fn matches(
    l1: &[F2],
    e1: &[(usize, usize)],
    p1: &[usize],
    l2: &[F2],
    e2: &[(usize, usize)],
    p2: &[usize],
) -> bool {
    let build = |l: &[F2], e: &[(usize, usize)], pr: &[usize]| {
        let mut w: BTreeMap<(usize, usize), (usize, bool)> = BTreeMap::new();
        for &(a, b) in e {
            w.entry((a.min(b), a.max(b))).or_default().0 += 1;
        }
        for (a, &b) in pr.iter().enumerate() {
            w.entry((a.min(b), a.max(b))).or_default().1 = true;
        }
        let mut g = UnGraph::<F2, (usize, bool)>::new_undirected();
        let ix: Vec<_> = l.iter().map(|&j| g.add_node(j)).collect();
        for ((a, b), x) in w {
            g.add_edge(ix[a], ix[b], x);
        }
        g
    };
    let (g1, g2) = (build(l1, e1, p1), build(l2, e2, p2));
    petgraph::algo::is_isomorphic_matching(&g1, &g2, |a, b| a == b, |a, b| a == b)
}

fn graph_summary(g: &OrientedGraph) -> (Vec<F2>, Vec<(usize, usize)>) {
    (g.nodes.iter().map(|n| n.j).collect(), g.edges.clone())
}

fn criterion_graph(cfg: &SuiteConfig) -> Result<Outcome, Error> {
    let base = PrimeParams::new(cfg.p, cfg.c, Variant::Lambda)?;
    let k = Fp2::new(cfg.p as u64)?;
    let phi3 = match &cfg.phi3 {
        Some(path) => load_phi3(path)?,
        None => phi_poly(3)?,
    };
    if !cfg.is_paper_example() {
        let ell = split_prime(&base).ok_or(Error::NotSplit(0))?;
        let g = oriented_graph(&base, ell)?;
        let auto = is_automorphism(&g, &g.conj) && (0..g.nodes.len()).all(|i| g.conj[g.conj[i]] == i);
        return Ok(Outcome::new(auto, format!("ell={ell}: {} nodes, {} edges, conjugation automorphism {}", g.nodes.len(), g.edges.len(), ok(auto))));
    }
    let g = oriented_graph(&base, 2)?;
    let (labels, edges) = graph_summary(&g);
    let (pl, pe, pp) = paper_diagram(k, false);
    let composite: Vec<usize> = (0..g.nodes.len()).map(|i| g.flip[g.conj[i]]).collect();
    let candidates = [("conjugation", &g.conj), ("negation", &g.flip), ("conjugation then negation", &composite)];
    let found: Vec<&str> = candidates.iter().filter(|(_, inv)| matches(&labels, &edges, inv, &pl, &pe, &pp)).map(|c| c.0).collect();
    let ident: Vec<usize> = (0..labels.len()).collect();
    let plain = matches(&labels, &edges, &ident, &pl, &pe, &ident);
    let (ll, le, _) = paper_diagram(k, true);
    let literal = matches(&labels, &edges, &ident, &ll, &le, &ident);
    let counts = [((66, 0), (66, 0), 1), ((21, 0), (21, 0), 2), ((57, 0), (57, 0), 2), ((37, 10), (37, -10), 2)];
    let mut count_bad = Vec::new();
    for ((a, b), (c, d), n) in counts {
        let got = isogeny_count(&phi3, k, k.elem(a, b), k.elem(c, d));
        if got != n {
            count_bad.push(format!("{}->{}: {got}", k.elem(a, b), k.elem(c, d)));
        }
    }
    let pass = plain && !found.is_empty() && count_bad.is_empty();
    Ok(Outcome::new(
        pass,
        format!(
            "{} nodes, {} edges; isomorphic to the diagram with E_i' = E_i^p {}; pairing realized by {found:?}; \
             same-j reading of E_i' {}; Phi_3 counts {}",
            g.nodes.len(),
            g.edges.len(),
            ok(plain),
            if literal { "also matches" } else { "does not match" },
            if count_bad.is_empty() { "ok".to_string() } else { format!("{count_bad:?}") }
        ),
    ))
}

fn is_automorphism(g: &OrientedGraph, map: &[usize]) -> bool {
    let norm = |(a, b): (usize, usize)| (a.min(b), a.max(b));
    let mut e1: Vec<_> = g.edges.iter().map(|&e| norm(e)).collect();
    let mut e2: Vec<_> = g.edges.iter().map(|&(a, b)| norm((map[a], map[b]))).collect();
    e1.sort();
    e2.sort();
    e1 == e2
}

/// Smallest prime ell != c, p split in the orientation order.
fn split_prime(ps: &PrimeParams) -> Option<i64> {
    let d = orientation_disc(ps);
    primes_up_to(50).into_iter().find(|&l| l != ps.c && l != ps.p && kronecker(d, l) == 1)
}

fn criterion_action(cfg: &SuiteConfig) -> Result<Outcome, Error> {
    let base = PrimeParams::new(cfg.p, cfg.c, Variant::Lambda)?;
    let ell = if cfg.is_paper_example() { 2 } else { split_prime(&base).ok_or(Error::NotSplit(0))? };
    let rep = isogeny_action_check(&base, ell)?;
    let vert = rep.vertical.iter().filter(|v| v.pass).count();
    Ok(Outcome::new(
        rep.pass,
        format!(
            "ell={ell}: quotient {} nodes / {} edges, predicted {} / {}, isomorphic {}; vertical checks {vert}/{}",
            rep.quotient.labels.len(),
            rep.quotient.edge_count(),
            rep.predicted.labels.len(),
            rep.predicted.edge_count(),
            ok(rep.isomorphic),
            rep.vertical.len()
        ),
    ))
}

fn random_disc(rng: &mut ChaCha8Rng, max: i64) -> i64 {
    loop {
        let d = -rng.gen_range(3..=max);
        if d.rem_euclid(4) <= 1 {
            return d;
        }
    }
}

fn prop_class_group(rng: &mut ChaCha8Rng, n: usize) -> Result<usize, Error> {
    let mut bad = 0;
    for _ in 0..n {
        let d = random_disc(rng, 3000);
        let cl = class_group(d)?;
        let e = identity(d)?;
        let (f, g, h) = (*cl.choose(rng).unwrap(), *cl.choose(rng).unwrap(), *cl.choose(rng).unwrap());
        let fg = compose(&f, &g)?;
        let ok = compose(&f, &e)? == f
            && compose(&f, &reduce(&inverse(&f))?)? == e
            && fg == compose(&g, &f)?
            && compose(&fg, &h)? == compose(&f, &compose(&g, &h)?)?
            && cl.contains(&fg);
        bad += !ok as usize;
    }
    Ok(bad)
}

fn prop_genus(rng: &mut ChaCha8Rng, n: usize) -> Result<usize, Error> {
    let mut bad = 0;
    for _ in 0..n {
        let d = random_disc(rng, 3000);
        let cl = class_group(d)?;
        let mu = assigned_characters(d)?.len() as u32;
        let mut sizes: BTreeMap<Vec<i32>, usize> = BTreeMap::new();
        for f in &cl {
            *sizes.entry(form_genus(f)?).or_default() += 1;
        }
        let genera = 1usize << mu.saturating_sub(1);
        let ok = sizes.len() == genera && sizes.values().all(|&s| s * genera == cl.len());
        bad += !ok as usize;
    }
    Ok(bad)
}

fn prop_nrd(rng: &mut ChaCha8Rng, n: usize) -> Result<usize, Error> {
    let mut bad = 0;
    for _ in 0..n {
        let alg = QuatAlgebra { cp: rng.gen_range(1..20000), q: rng.gen_range(1..5000) };
        let mut el = || QuatElement::from_ints(alg, std::array::from_fn(|_| rng.gen_range(-1000..=1000)));
        let (x, y) = (el(), el());
        bad += (x.mul(&y)?.nrd() != x.nrd() * y.nrd()) as usize;
    }
    Ok(bad)
}

fn prop_division(rng: &mut ChaCha8Rng, n: usize) -> Result<usize, Error> {
    let primes: Vec<i64> = primes_up_to(60).into_iter().filter(|&p| p > 3).collect();
    let mut bad = 0;
    let mut done = 0;
    while done < n {
        let p = *primes.choose(rng).unwrap();
        let k = Fp2::new(p as u64)?;
        let Ok(e) = Curve::new(k, k.random(rng), k.random(rng)) else { continue };
        let m = rng.gen_range(2..=8i64);
        if m % p == 0 {
            continue;
        }
        let pt = e.random_point(rng);
        let Point::Aff(x, y) = pt else { continue };
        if y.is_zero() {
            continue;
        }
        done += 1;
        let psi = division_poly(&e, m)?;
        bad += (psi.eval(x).is_zero() != (e.mul(m as u64, &pt) == Point::Inf)) as usize;
    }
    Ok(bad)
}

fn prop_phi_symmetry(rng: &mut ChaCha8Rng, n: usize) -> Result<usize, Error> {
    let phis = [phi_poly(2)?, phi_poly(3)?];
    let mut bad = phis.iter().filter(|p| !p.is_symmetric()).count();
    let primes: Vec<i64> = primes_up_to(1000).into_iter().filter(|&p| p > 3).collect();
    for i in 0..n {
        let p = *primes.choose(rng).unwrap();
        let k = Fp2::new(p as u64)?;
        let phi = &phis[i % 2];
        let (x, y) = (k.random(rng), k.random(rng));
        bad += (phi.eval(k, x, y) != phi.eval(k, y, x)) as usize;
    }
    Ok(bad)
}

fn criterion_properties(cfg: &SuiteConfig) -> Result<Outcome, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9);
    let n = cfg.property_cases;
    let results = [
        ("class group", prop_class_group(&mut rng, n)?),
        ("genus", prop_genus(&mut rng, n)?),
        ("Nrd", prop_nrd(&mut rng, n)?),
        ("psi_n", prop_division(&mut rng, n)?),
        ("Phi symmetry", prop_phi_symmetry(&mut rng, n)?),
    ];
    let pass = results.iter().all(|r| r.1 == 0);
    let detail = results.iter().map(|(name, b)| format!("{name} {b}/{n}")).collect::<Vec<_>>().join(", ");
    Ok(Outcome::new(pass, format!("failures: {detail}; seed {:#x}", cfg.seed)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use eichler_core::numth::is_prime;

    #[test]
    fn imprimitive_representation() {
        assert!(represents(7, 44));
        assert!(eichler_core::numth::represent(7, 44).is_empty());
        assert!(!represents(32, 12));
    }

    #[test]
    fn samples_are_seeded() {
        let cfg = SuiteConfig { samples: 5, ..SuiteConfig::new(101, 3) };
        let (a, b) = (sample_orders(&cfg), sample_orders(&cfg));
        assert_eq!(a.iter().map(|s| (s.q, s.r)).collect::<Vec<_>>(), b.iter().map(|s| (s.q, s.r)).collect::<Vec<_>>());
        assert!(a.iter().all(|s| is_prime(s.q as u64)));
    }
}
