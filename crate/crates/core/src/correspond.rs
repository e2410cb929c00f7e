//! Orders, forms and j-invariants side by side: the correspondence table,
//! class counts, the order-two cases, and the isogeny action on forms
//! against the Velu-computed graph.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use petgraph::graph::UnGraph;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classpoly::{hilbert_mod, precompute, resultant_vp};
use crate::ec::{isogeny_count, oriented_graph, phi_poly, OrientedGraph};
use crate::ff::{poly_gcd, roots, Fp2, ModPoly, F2};
use crate::numth::{find_q, inv_mod, is_prime, kronecker, represent, PrimeParams, Variant};
use crate::qform::{
    ambiguous_in_genus, class_number, form_order, form_with_first_coefficient, genus_class, inverse, isogeny_action,
    prime_splitting_form, reduce, represented_prime, tabulated_ambiguous, BQForm,
};
use crate::quat::{discriminant, eichler_o, eichler_oprime, index, intersect, order_to_form, successive_minima};
use crate::Error;

/// Search bound for the auxiliary prime represented by a form.
const Q_BOUND: i64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceRow {
    /// Reduced representative with b >= 0.
    pub form: BQForm,
    /// Whether (a, -b, a') is a distinct class collapsed into this row.
    pub both_signs: bool,
    pub variant: Variant,
    /// Eichler order parameters: r for the unprimed family, r' otherwise.
    pub q: i64,
    pub r: i64,
    pub d1: i64,
    pub d2: i64,
    pub gcd_poly: ModPoly,
    pub j_values: Vec<F2>,
    pub in_fp: bool,
    /// x^2 + a y^2 = 4c (resp. c) with gcd(x, y) = 1.
    pub rep_solution: Option<(i64, i64)>,
    pub form_order: u64,
    /// The order built from (q, r) maps back to this row's form.
    pub roundtrip: bool,
    /// The two smallest discriminants embedded in the order.
    pub minima: Option<(i128, i128)>,
    /// Observed disagreements with the theorems.
    pub findings: Vec<String>,
}

impl CorrespondenceRow {
    pub fn order_label(&self) -> String {
        match self.variant {
            Variant::Lambda => format!("O_c({},{})", self.q, self.r),
            Variant::LambdaPrime => format!("O'_c({},{})", self.q, self.r),
        }
    }

    pub fn form_label(&self) -> String {
        let f = &self.form;
        if self.both_signs {
            format!("({}, ±{}, {})", f.a, f.b, f.ap)
        } else {
            format!("({}, {}, {})", f.a, f.b, f.ap)
        }
    }

    pub fn j_label(&self) -> String {
        self.j_values.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(", ")
    }

    /// Minima predicted from the form: (a, a') or (4a, 4a').
    pub fn predicted_minima(&self) -> (i128, i128) {
        let (a, ap) = (self.form.a as i128, self.form.ap as i128);
        match self.variant {
            Variant::Lambda => (a, ap),
            Variant::LambdaPrime => (4 * a, 4 * ap),
        }
    }

    /// Whether the minima statement applies (a > 4, resp. a > 1).
    pub fn minima_applies(&self) -> bool {
        match self.variant {
            Variant::Lambda => self.form.a > 4,
            Variant::LambdaPrime => self.form.a > 1,
        }
    }
}

/// D1, D2 for a reduced form of the params' discriminant.
pub fn row_discriminants(variant: Variant, f: &BQForm) -> (i64, i64) {
    match variant {
        Variant::Lambda => (-f.a, -f.ap),
        Variant::LambdaPrime => (-4 * f.a, -4 * f.ap),
    }
}

/// An admissible prime q represented by f, with the middle coefficient b of
/// the equivalent form (q, b, *).
pub fn form_parameters(params: &PrimeParams, f: &BQForm) -> Result<(i64, i64), Error> {
    let (q, (x, y)) = represented_prime(f, params, Q_BOUND).ok_or(Error::BadQ(0))?;
    Ok((q, form_with_first_coefficient(f, x, y).b))
}

/// Recover (q, r) or (q, r') from a form via a represented admissible prime.
pub fn order_parameters(params: &PrimeParams, f: &BQForm) -> Result<(i64, i64), Error> {
    let (q, b) = form_parameters(params, f)?;
    // r and -r give inverse forms; keep the odd representative in (0, q)
    Ok(match params.variant {
        Variant::Lambda => {
            // b = 4r (mod 2q)
            let i4 = inv_mod(4, q).unwrap();
            let r = ((b as i128 * i4 as i128).rem_euclid(q as i128)) as i64;
            (q, if r % 2 == 0 { q - r } else { r })
        }
        Variant::LambdaPrime => {
            let r = b.rem_euclid(2 * q);
            (q, r.min(2 * q - r))
        }
    })
}

fn build_row(params: &PrimeParams, f: &BQForm, both_signs: bool) -> Result<CorrespondenceRow, Error> {
    let p = params.p;
    let (d1, d2) = row_discriminants(params.variant, f);
    let g = poly_gcd(&hilbert_mod(d1, p)?, &hilbert_mod(d2, p)?)?;
    let mut j_values = if g.deg() >= 1 { roots(&g, true) } else { vec![] };
    j_values.dedup();
    let m = match params.variant {
        Variant::Lambda => 4 * params.c,
        Variant::LambdaPrime => params.c,
    };
    let rep_solution = represent(f.a, m).first().copied();
    let in_fp = j_values.len() == 1 && j_values[0].in_fp();
    let (q, r) = order_parameters(params, f)?;
    let order = match params.variant {
        Variant::Lambda => eichler_o(params, q, r)?,
        Variant::LambdaPrime => eichler_oprime(params, q, r)?,
    };
    let back = order_to_form(&order)?;
    let roundtrip = back == *f || back == reduce(&inverse(f))?;
    let mut row = CorrespondenceRow {
        form: *f,
        both_signs,
        variant: params.variant,
        q,
        r,
        d1,
        d2,
        gcd_poly: g,
        j_values,
        in_fp,
        rep_solution,
        form_order: form_order(f)?,
        roundtrip,
        minima: None,
        findings: vec![],
    };
    let (m1, m2) = row.predicted_minima();
    row.minima = successive_minima(&order, m2.max(m1) + 1);
    let k = Fp2::new(p as u64)?;
    let fp_roots = row.j_values.iter().filter(|j| j.in_fp()).count();
    if row.gcd_poly.deg() as usize != row.j_values.len() {
        row.findings.push(format!("gcd {} is not squarefree", row.gcd_poly.format()));
    }
    match row.j_values.len() {
        1 if !row.j_values[0].in_fp() => row.findings.push("single common root outside F_p".into()),
        2 if fp_roots == 2 => row.findings.push("THEOREM_VIOLATION: degree-2 gcd splits over F_p".into()),
        2 if k.frob(row.j_values[0]) != row.j_values[1] => {
            row.findings.push("common roots are not conjugate".into())
        }
        0 => row.findings.push("no common root".into()),
        n if n > 2 => row.findings.push(format!("{n} common roots")),
        _ => {}
    }
    if row.in_fp != row.rep_solution.is_some() {
        row.findings.push("representability does not match the field of definition".into());
    }
    if !row.roundtrip {
        row.findings.push(format!("order round trip gives {back}"));
    }
    if row.minima_applies() && row.minima != Some((m1, m2)) {
        row.findings.push(format!("successive minima {:?}, expected ({m1}, {m2})", row.minima));
    }
    Ok(row)
}

/// One row per class {f, f^-1} in the genus class of q, sorted by form.
pub fn correspondence_table(params: &PrimeParams, q: i64) -> Result<Vec<CorrespondenceRow>, Error> {
    let forms = genus_class(params, q)?;
    let mut reps: Vec<(BQForm, bool)> = Vec::new();
    for f in &forms {
        let inv = reduce(&inverse(f))?;
        if f.b < 0 && forms.contains(&inv) {
            continue;
        }
        reps.push((*f, inv != *f));
    }
    let ds: Vec<i64> = reps
        .iter()
        .flat_map(|(f, _)| {
            let (a, b) = row_discriminants(params.variant, f);
            [a, b]
        })
        .collect();
    precompute(&ds)?;
    reps.par_iter().map(|(f, both)| build_row(params, f, *both)).collect()
}

/// Smallest admissible q.
pub fn default_q(params: &PrimeParams) -> Result<i64, Error> {
    let mut bound = 1000;
    loop {
        if let Some(&q) = find_q(params, bound).first() {
            return Ok(q);
        }
        if bound > 1 << 24 {
            return Err(Error::BadQ(0));
        }
        bound *= 8;
    }
}

pub fn fiber_size(row: &CorrespondenceRow) -> usize {
    if row.in_fp && row.form_order <= 2 {
        1
    } else {
        2
    }
}

pub fn render_table(rows: &[CorrespondenceRow], c: i64) -> String {
    let labels: Vec<(String, String, String)> = rows
        .iter()
        .map(|r| (r.order_label().replace("_c", &format!("_{c}")), r.form_label(), r.j_label()))
        .collect();
    let w0 = labels.iter().map(|l| l.0.chars().count()).max().unwrap_or(0);
    let w1 = labels.iter().map(|l| l.1.chars().count()).max().unwrap_or(0);
    let mut s = String::new();
    for (o, f, j) in labels {
        let _ = writeln!(s, "{o:<w0$}  {f:<w1$}  {j}");
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub params: PrimeParams,
    pub q: i64,
    /// h(-4cp), resp. h(-cp).
    pub h: usize,
    pub eta_tabulated: usize,
    pub eta_computed: usize,
    pub ambiguous_match: bool,
    /// {f, f^-1} classes in the genus class.
    pub classes: usize,
    /// 4 * (h/4 + eta/2)
    pub formula_times_four: usize,
    pub fiber_total: Option<usize>,
    pub pass: bool,
}

/// Class counts: enumerated classes against h/4 + eta/2.
pub fn count_check(params: &PrimeParams) -> Result<CountReport, Error> {
    let q = default_q(params)?;
    let h = match params.variant {
        Variant::Lambda => class_number(-4 * params.cp())?,
        Variant::LambdaPrime => class_number(-params.cp())?,
    };
    let (eta, amb) = ambiguous_in_genus(params, q)?;
    let tab = tabulated_ambiguous(params);
    let mut amb_sorted = amb.clone();
    amb_sorted.sort_by_key(|f| f.display_key());
    let tab_reduced: Vec<BQForm> = {
        let mut v: Vec<BQForm> = tab.iter().map(reduce).collect::<Result<_, _>>()?;
        v.sort_by_key(|f| f.display_key());
        v
    };
    let forms = genus_class(params, q)?;
    let mut classes = BTreeSet::new();
    for f in &forms {
        let inv = reduce(&inverse(f))?;
        classes.insert(f.display_key().min(inv.display_key()));
    }
    let formula = h + 2 * tab.len();
    let pass = 4 * classes.len() == formula && amb_sorted == tab_reduced;
    Ok(CountReport {
        params: *params,
        q,
        h,
        eta_tabulated: tab.len(),
        eta_computed: eta,
        ambiguous_match: amb_sorted == tab_reduced,
        classes: classes.len(),
        formula_times_four: formula,
        fiber_total: None,
        pass,
    })
}

/// count_check plus the fiber total over the correspondence table.
pub fn count_check_with_fibers(params: &PrimeParams) -> Result<CountReport, Error> {
    let mut rep = count_check(params)?;
    let rows = correspondence_table(params, rep.q)?;
    let total: usize = rows.iter().map(fiber_size).sum();
    rep.fiber_total = Some(total);
    rep.pass &= 2 * total == rep.h;
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixEntry {
    pub case: u8,
    pub form: BQForm,
    pub d1: i64,
    pub d2: i64,
    pub gcd_poly: ModPoly,
    pub single_fp_root: bool,
    /// v_p(J(D1, D2)), observed.
    pub vp: Option<u32>,
    pub note: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixReport {
    pub params: PrimeParams,
    pub entries: Vec<AppendixEntry>,
    pub pass: bool,
}

fn appendix_case(params: &PrimeParams, f: &BQForm) -> u8 {
    let (c, p) = (params.c, params.p);
    match (f.a, f.b.abs(), f.ap) {
        (1, 1, _) => 1,
        (a, b, _) if a == c && b == c => 2,
        (4, 0, x) if x == c * p => 3,
        (a, 0, x) if a == 4 * c && x == p => 4,
        (a, 0, x) if a == c && x == 4 * p => 5,
        (4, 4, _) | (8, 8, _) => 6,
        _ => 0,
    }
}

/// The order-two forms of the genus class: a single common F_p root, plus
/// the root count of H_{-4c} and the 2-isogeny between its roots where
/// that statement applies.
pub fn appendix_check(params: &PrimeParams) -> Result<AppendixReport, Error> {
    let (p, c) = (params.p, params.c);
    let q = default_q(params)?;
    let k = Fp2::new(p as u64)?;
    let (_, amb) = ambiguous_in_genus(params, q)?;
    let mut entries = Vec::new();
    for f in amb {
        let (d1, d2) = row_discriminants(params.variant, &f);
        let g = poly_gcd(&hilbert_mod(d1, p)?, &hilbert_mod(d2, p)?)?;
        let rs = if g.deg() >= 1 { roots(&g, true) } else { vec![] };
        let single = g.deg() == 1 && rs[0].in_fp();
        let vp = resultant_vp(d1, d2, p).ok();
        let case = appendix_case(params, &f);
        let mut note = String::new();
        let mut pass = single;
        match case {
            1 | 3 => {
                let ok = single && rs[0] == k.from_i64(1728);
                let _ = write!(note, "common root 1728: {ok}");
                pass &= ok;
            }
            2 if kronecker(-p, c) == 1 && 4 * c < p => {
                let h4c = hilbert_mod(-4 * c, p)?;
                let mut fp: Vec<F2> = roots(&h4c, false);
                fp.dedup();
                if p % 4 == 1 && c % 4 == 3 {
                    let _ = write!(note, "H_-4c has {} F_p-root(s)", fp.len());
                    pass &= fp.len() == 1;
                } else if p % 4 == 3 && c % 4 == 1 {
                    let phi2 = phi_poly(2)?;
                    let linked = fp.len() == 2 && isogeny_count(&phi2, k, fp[0], fp[1]) > 0;
                    let _ = write!(note, "H_-4c has {} F_p-roots, 2-isogenous: {linked}", fp.len());
                    pass &= linked;
                }
            }
            _ => {}
        }
        entries.push(AppendixEntry { case, form: f, d1, d2, gcd_poly: g, single_fp_root: single, vp, note, pass });
    }
    let pass = entries.iter().all(|e| e.pass);
    Ok(AppendixReport { params: *params, entries, pass })
}

/// Node label for graph matching: surface flag and the set {j, j^p}.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct JLabel {
    pub surface: bool,
    pub js: Vec<F2>,
}

fn j_set(k: Fp2, j: F2) -> Vec<F2> {
    let mut v = vec![j, k.frob(j)];
    v.sort();
    v.dedup();
    v
}

/// A small undirected multigraph with labelled nodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledGraph {
    pub labels: Vec<JLabel>,
    /// (i, j) with i <= j mapped to multiplicity.
    pub edges: BTreeMap<(usize, usize), usize>,
}

impl LabelledGraph {
    fn add_edge(&mut self, a: usize, b: usize) {
        *self.edges.entry((a.min(b), a.max(b))).or_default() += 1;
    }

    pub fn edge_count(&self) -> usize {
        self.edges.values().sum()
    }

    fn to_petgraph(&self) -> UnGraph<JLabel, usize> {
        let mut g = UnGraph::new_undirected();
        let ix: Vec<_> = self.labels.iter().map(|l| g.add_node(l.clone())).collect();
        for (&(a, b), &m) in &self.edges {
            g.add_edge(ix[a], ix[b], m);
        }
        g
    }

    pub fn isomorphic(&self, other: &LabelledGraph) -> bool {
        let (g1, g2) = (self.to_petgraph(), other.to_petgraph());
        petgraph::algo::is_isomorphic_matching(&g1, &g2, |a, b| a == b, |a, b| a == b)
    }
}

/// The oriented graph modulo Galois conjugation.
pub fn frobenius_quotient(g: &OrientedGraph) -> LabelledGraph {
    let k = Fp2::new(g.p as u64).unwrap();
    let mut class = vec![usize::MAX; g.nodes.len()];
    let mut labels = Vec::new();
    for i in 0..g.nodes.len() {
        if class[i] == usize::MAX {
            class[i] = labels.len();
            class[g.conj[i]] = labels.len();
            labels.push(JLabel { surface: g.nodes[i].surface, js: j_set(k, g.nodes[i].j) });
        }
    }
    let mut q = LabelledGraph { labels, edges: BTreeMap::new() };
    // one quotient edge per orbit {e, conj(e)}
    let mut seen: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &(a, b) in &g.edges {
        *counts.entry((a, b)).or_default() += 1;
    }
    for (&(a, b), &m) in &counts {
        let (ca, cb) = (g.conj[a].min(g.conj[b]), g.conj[a].max(g.conj[b]));
        for n in 0..m {
            let key = (a.min(ca), b.min(cb).max(a.min(ca)), n);
            let orbit = if (a, b) <= (ca, cb) { (a, b, n) } else { (ca, cb, n) };
            let _ = key;
            if seen.insert(orbit) {
                q.add_edge(class[a], class[b]);
            }
        }
    }
    q
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerticalCheck {
    pub surface_form: BQForm,
    pub q: i64,
    pub rprime: i64,
    pub floor_form: BQForm,
    /// The floor form lies in the unprimed genus class.
    pub in_genus: bool,
    pub index_in_o: Option<i128>,
    pub index_in_oprime: Option<i128>,
    pub tilde_disc: i128,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsogenyActionReport {
    pub params: PrimeParams,
    pub ell: i64,
    pub ec_nodes: usize,
    pub ec_edges: usize,
    pub non_oriented: usize,
    pub quotient: LabelledGraph,
    pub predicted: LabelledGraph,
    pub isomorphic: bool,
    pub vertical: Vec<VerticalCheck>,
    pub pass: bool,
}

/// Forms of one genus class with edges f -- f g^2.
fn horizontal_edges(forms: &[BQForm], g: &BQForm, offset: usize, out: &mut LabelledGraph) -> Result<(), Error> {
    let index: HashMap<BQForm, usize> = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    // each f contributes f -> f g^2; the reverse direction is f g^-2, so
    // every undirected edge appears twice unless g^2 is trivial
    let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, f) in forms.iter().enumerate() {
        let t = isogeny_action(f, g)?;
        let j = *index.get(&t).ok_or(Error::BadParams(format!("{t} left the genus class")))?;
        *directed.entry((i, j)).or_default() += 1;
        let t2 = isogeny_action(f, &reduce(&inverse(g))?)?;
        let j2 = *index.get(&t2).ok_or(Error::BadParams(format!("{t2} left the genus class")))?;
        *directed.entry((i, j2)).or_default() += 1;
    }
    for (&(i, j), &m) in &directed {
        if i < j {
            for _ in 0..m {
                out.add_edge(offset + i, offset + j);
            }
        } else if i == j {
            for _ in 0..m.div_ceil(2) {
                out.add_edge(offset + i, offset + i);
            }
        }
    }
    Ok(())
}

/// The form-side prediction: genus forms as nodes, labelled by their
/// correspondence rows, with the isogeny action and the vertical map.
pub fn predicted_graph(
    params: &PrimeParams,
    ell: i64,
    g_override: Option<BQForm>,
) -> Result<(LabelledGraph, Vec<VerticalCheck>), Error> {
    let k = Fp2::new(params.p as u64)?;
    let lam = params.with_variant(Variant::Lambda)?;
    let surface_params = if params.cp() % 4 == 3 { Some(params.with_variant(Variant::LambdaPrime)?) } else { None };
    let mut graph = LabelledGraph { labels: vec![], edges: BTreeMap::new() };
    let mut vertical = Vec::new();

    let label_forms = |ps: &PrimeParams, surface: bool| -> Result<(Vec<BQForm>, Vec<JLabel>), Error> {
        let q = default_q(ps)?;
        let forms = genus_class(ps, q)?;
        let rows = correspondence_table(ps, q)?;
        let mut labels = Vec::new();
        for f in &forms {
            let key = if f.b < 0 { reduce(&inverse(f))? } else { *f };
            let row = rows.iter().find(|r| r.form == key).ok_or(Error::BadParams(format!("no row for {f}")))?;
            let js = row.j_values.first().map(|&j| j_set(k, j)).unwrap_or_default();
            labels.push(JLabel { surface, js });
        }
        Ok((forms, labels))
    };

    let mut surface_forms = Vec::new();
    if let Some(sp) = surface_params {
        let (forms, labels) = label_forms(&sp, true)?;
        graph.labels.extend(labels);
        if kronecker(-params.cp(), ell) == 1 {
            let g = match g_override {
                Some(g) if g.disc() == sp.disc() => g,
                _ => prime_splitting_form(ell, &sp)?,
            };
            horizontal_edges(&forms, &g, 0, &mut graph)?;
        }
        surface_forms = forms;
    }
    let offset = graph.labels.len();
    let (floor_forms, labels) = label_forms(&lam, false)?;
    graph.labels.extend(labels);
    // the floor has horizontal ell-edges unless ell divides the conductor 2
    if !(ell == 2 && surface_params.is_some()) {
        let g = match g_override {
            Some(g) if g.disc() == lam.disc() => g,
            _ => prime_splitting_form(ell, &lam)?,
        };
        horizontal_edges(&floor_forms, &g, offset, &mut graph)?;
    }
    if ell == 2 {
        if let Some(sp) = surface_params {
            for (i, f) in surface_forms.iter().enumerate() {
                let v = vertical_check(&sp, f, &floor_forms)?;
                if let Some(j) = floor_forms.iter().position(|g| *g == v.floor_form) {
                    graph.add_edge(i, offset + j);
                }
                vertical.push(v);
            }
        }
    }
    Ok((graph, vertical))
}

/// Vertical 2-isogeny from the surface form f: keep q, go from r' to r.
pub fn vertical_check(sp: &PrimeParams, f: &BQForm, floor: &[BQForm]) -> Result<VerticalCheck, Error> {
    let cp = sp.cp();
    let (q, b) = form_parameters(sp, f)?;
    let rprime = b.rem_euclid(2 * q);
    let floor_form = reduce(&BQForm::new(q, 4 * rprime, (4 * rprime * rprime + 4 * cp) / q))?;
    let lam = sp.with_variant(Variant::Lambda)?;
    let r = rprime.rem_euclid(q);
    let o = eichler_o(&lam, q, r)?;
    let op = eichler_oprime(sp, q, rprime)?;
    let t = intersect(&o, &op)?;
    let (i1, i2) = (index(&t, &o).ok(), index(&t, &op).ok());
    let disc = discriminant(&t);
    let in_genus = floor.contains(&floor_form);
    let c2p2 = (cp as i128) * (cp as i128);
    let pass = in_genus && i1 == Some(2) && i2 == Some(2) && disc == 4 * c2p2 && order_to_form(&o)? == floor_form;
    Ok(VerticalCheck {
        surface_form: *f,
        q,
        rprime,
        floor_form,
        in_genus,
        index_in_o: i1,
        index_in_oprime: i2,
        tilde_disc: disc,
        pass,
    })
}

/// Velu-computed oriented graph (modulo conjugation) against the graph
/// predicted by the action of the prime form above ell.
pub fn isogeny_action_check(params: &PrimeParams, ell: i64) -> Result<IsogenyActionReport, Error> {
    if !is_prime(ell as u64) || ell == params.c {
        return Err(Error::NotSplit(ell));
    }
    let g = oriented_graph(params, ell)?;
    let quotient = frobenius_quotient(&g);
    let (predicted, vertical) = predicted_graph(params, ell, None)?;
    let isomorphic = quotient.isomorphic(&predicted);
    let pass = isomorphic && vertical.iter().all(|v| v.pass);
    Ok(IsogenyActionReport {
        params: *params,
        ell,
        ec_nodes: g.nodes.len(),
        ec_edges: g.edges.len(),
        non_oriented: g.non_oriented,
        quotient,
        predicted,
        isomorphic,
        vertical,
        pass,
    })
}

/// Every valid (p, c, variant) with p <= pmax.
pub fn sweep_params(pmax: i64) -> Vec<PrimeParams> {
    let mut out = Vec::new();
    for p in 5..=pmax {
        if !is_prime(p as u64) {
            continue;
        }
        for c in 2..p {
            if !is_prime(c as u64) || 16 * c >= 3 * p {
                continue;
            }
            out.push(PrimeParams::new(p, c, Variant::Lambda).unwrap());
            if let Ok(pp) = PrimeParams::new(p, c, Variant::LambdaPrime) {
                out.push(pp);
            }
        }
    }
    out
}

/// All class polynomials a sweep's tables need.
pub fn sweep_discriminants(params: &[PrimeParams]) -> Result<Vec<i64>, Error> {
    let mut ds = BTreeSet::new();
    for ps in params {
        let q = default_q(ps)?;
        for f in genus_class(ps, q)? {
            let (a, b) = row_discriminants(ps.variant, &f);
            ds.insert(a);
            ds.insert(b);
        }
    }
    Ok(ds.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(variant: Variant) -> PrimeParams {
        PrimeParams::new(101, 3, variant).unwrap()
    }

    #[test]
    fn example_rows() {
        let k = Fp2::new(101).unwrap();
        let rows = correspondence_table(&ex(Variant::LambdaPrime), 11).unwrap();
        assert_eq!(rows.len(), 3);
        let r0 = &rows[0];
        assert_eq!((r0.form, r0.j_values.clone(), r0.in_fp), (BQForm::new(2, 1, 38), vec![k.from_i64(21)], true));
        let r = rows.iter().find(|r| r.form == BQForm::new(3, 3, 26)).unwrap();
        assert_eq!(r.j_values, vec![k.from_i64(66)]);
        assert_eq!(r.rep_solution, Some((0, 1)));
        assert_eq!(fiber_size(r), 1);
        assert!(rows.iter().all(|r| r.findings.is_empty()), "{rows:#?}");
        let rows = correspondence_table(&ex(Variant::Lambda), 11).unwrap();
        let r = rows.iter().find(|r| r.form == BQForm::new(32, 12, 39)).unwrap();
        assert!(!r.in_fp);
        assert_eq!(r.j_values.len(), 2);
        assert_eq!((r.q, r.r), (59, 13));
        let r = rows.iter().find(|r| r.form == BQForm::new(11, 6, 111)).unwrap();
        assert_eq!(fiber_size(r), 2);
        assert_eq!(r.minima, Some((11, 111)));
        assert!(rows.iter().all(|r| r.findings.is_empty()), "{rows:#?}");
    }

    #[test]
    fn example_counts() {
        let rep = count_check_with_fibers(&ex(Variant::LambdaPrime)).unwrap();
        assert_eq!((rep.h, rep.classes, rep.eta_tabulated), (10, 3, 1));
        assert!(rep.pass);
        let rep = count_check_with_fibers(&ex(Variant::Lambda)).unwrap();
        assert_eq!(rep.classes, 3);
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn example_appendix() {
        let rep = appendix_check(&ex(Variant::LambdaPrime)).unwrap();
        assert_eq!(rep.entries.len(), 1);
        assert_eq!(rep.entries[0].case, 2);
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn example_action() {
        let rep = isogeny_action_check(&ex(Variant::LambdaPrime), 2).unwrap();
        assert_eq!(rep.ec_nodes, 20);
        assert_eq!(rep.quotient.labels.len(), 10);
        assert_eq!(rep.quotient.edge_count(), 10);
        assert!(rep.isomorphic, "{:#?}\n{:#?}", rep.quotient, rep.predicted);
        assert!(rep.vertical.iter().all(|v| v.pass), "{:#?}", rep.vertical);
    }

    #[test]
    fn principal_action_gives_loops() {
        let sp = ex(Variant::LambdaPrime);
        let id = crate::qform::identity(sp.disc()).unwrap();
        let (g, _) = predicted_graph(&sp, 11, Some(id)).unwrap();
        let surface: Vec<_> = g.edges.iter().filter(|((a, _), _)| g.labels[*a].surface).collect();
        assert_eq!(surface.len(), 5);
        assert!(surface.iter().all(|((a, b), &m)| a == b && m == 1));
    }
}
