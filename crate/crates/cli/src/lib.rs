//! Command implementations behind the `eichler` binary, plus the
//! acceptance suite run by `verify-paper`.

pub mod suite;

use std::io::Write;
use std::path::PathBuf;

use eichler_core::classpoly::{hilbert_mod, hilbert_with};
use eichler_core::correspond::{correspondence_table, default_q, render_table, CorrespondenceRow};
use eichler_core::ec::{isogeny_count, load_phi3, oriented_graph, phi_poly, supersingular_js, ModularPolynomial};
use eichler_core::ff::{factor_fp, Fp2};
use eichler_core::numth::sqrt_mod_prime;
use eichler_core::qform::{ambiguous_in_genus, genus_class};
use eichler_core::quat::{discriminant, eichler_o, eichler_oprime, embedded_discs, order_to_form, successive_minima};
use eichler_core::{Error, PrimeParams, Variant};
use serde::{Deserialize, Serialize};

pub const EXIT_OK: i32 = 0;
pub const EXIT_THEOREM: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Output {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub p: i64,
    pub c: i64,
    pub q: Option<i64>,
    pub ell: Option<i64>,
    pub variant: Option<Variant>,
    pub output: Output,
    pub precision_override: Option<u32>,
    pub out_path: Option<PathBuf>,
    pub phi3: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(p: i64, c: i64) -> RunConfig {
        RunConfig {
            p,
            c,
            q: None,
            ell: None,
            variant: None,
            output: Output::Text,
            precision_override: None,
            out_path: None,
            phi3: None,
            seed: suite::DEFAULT_SEED,
        }
    }

    pub fn params(&self) -> Result<PrimeParams, Error> {
        PrimeParams::new(self.p, self.c, self.variant.unwrap_or(Variant::Lambda))
    }

    /// The variants a command should cover: the requested one, or every
    /// one that exists for (p, c).
    pub fn variants(&self) -> Result<Vec<PrimeParams>, Error> {
        let base = PrimeParams::new(self.p, self.c, Variant::Lambda)?;
        Ok(match self.variant {
            Some(v) => vec![base.with_variant(v)?],
            None => [Variant::LambdaPrime, Variant::Lambda].iter().filter_map(|&v| base.with_variant(v).ok()).collect(),
        })
    }

    pub fn phi3(&self) -> Result<ModularPolynomial, Error> {
        match &self.phi3 {
            Some(path) => load_phi3(path),
            None => phi_poly(3),
        }
    }

    fn emit(&self, text: &str) -> Result<(), Error> {
        match &self.out_path {
            Some(path) => std::fs::write(path, text).map_err(|e| Error::BadParams(e.to_string())),
            None => {
                let mut out = std::io::stdout().lock();
                let _ = out.write_all(text.as_bytes());
                Ok(())
            }
        }
    }
}

fn usage(e: Error) -> i32 {
    eprintln!("error: {e}");
    EXIT_USAGE
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).unwrap() + "\n"
}

#[derive(Serialize, Deserialize)]
pub struct GenusOutput {
    pub params: PrimeParams,
    pub q: i64,
    pub forms: Vec<eichler_core::BQForm>,
    pub eta: usize,
    pub ambiguous: Vec<eichler_core::BQForm>,
}

pub fn cmd_genus(cfg: &RunConfig) -> i32 {
    let run = || -> Result<String, Error> {
        let mut outs = Vec::new();
        for params in cfg.variants()? {
            let q = match cfg.q {
                Some(q) => q,
                None => default_q(&params)?,
            };
            let forms = genus_class(&params, q)?;
            let (eta, ambiguous) = ambiguous_in_genus(&params, q)?;
            outs.push(GenusOutput { params, q, forms, eta, ambiguous });
        }
        Ok(match cfg.output {
            Output::Json => json(&outs),
            _ => {
                let mut s = String::new();
                for o in &outs {
                    s += &format!("{:?} p={} c={} q={} disc={}\n", o.params.variant, o.params.p, o.params.c, o.q, o.params.disc());
                    for f in &o.forms {
                        s += &format!("  {f}\n");
                    }
                    s += &format!("  eta = {}:", o.eta);
                    for f in &o.ambiguous {
                        s += &format!(" {f}");
                    }
                    s += "\n";
                }
                s
            }
        })
    };
    match run() {
        Ok(s) => cfg.emit(&s).map(|_| EXIT_OK).unwrap_or_else(usage),
        Err(e) => usage(e),
    }
}

#[derive(Serialize, Deserialize)]
pub struct EichlerOutput {
    pub params: PrimeParams,
    pub q: i64,
    pub r: i64,
    pub basis: Vec<String>,
    pub discriminant: i128,
    pub form: eichler_core::BQForm,
    pub minima: Option<(i128, i128)>,
    pub embedded_discs: Vec<i128>,
}

/// `r` is r for O_c(q, r) and r' for O'_c(q, r').
pub fn cmd_eichler(cfg: &RunConfig, r: Option<i64>) -> i32 {
    let run = || -> Result<String, Error> {
        let params = cfg.params()?;
        let q = match cfg.q {
            Some(q) => q,
            None => default_q(&params)?,
        };
        let r = match r {
            Some(r) => r,
            None => {
                let r = sqrt_mod_prime(-params.cp(), q).ok_or(Error::BadQ(q))?;
                match params.variant {
                    Variant::Lambda => r,
                    Variant::LambdaPrime => eichler_core::numth::lift_sqrt_mod_4q(r, q, params.cp())?,
                }
            }
        };
        let o = match params.variant {
            Variant::Lambda => eichler_o(&params, q, r)?,
            Variant::LambdaPrime => eichler_oprime(&params, q, r)?,
        };
        let form = order_to_form(&o)?;
        let bound = 4 * (form.a.max(form.ap) as i128) + 1;
        let out = EichlerOutput {
            params,
            q,
            r,
            basis: o.basis.iter().map(|b| b.to_string()).collect(),
            discriminant: discriminant(&o),
            form,
            minima: successive_minima(&o, bound),
            embedded_discs: embedded_discs(&o, bound).into_iter().take(6).collect(),
        };
        Ok(match cfg.output {
            Output::Json => json(&out),
            _ => {
                let mut s = format!("order {}({q},{r})\n", if params.variant == Variant::Lambda { "O_c" } else { "O'_c" });
                for b in &out.basis {
                    s += &format!("  {b}\n");
                }
                s += &format!("disc {}\nform {}\n", out.discriminant, out.form);
                match out.minima {
                    Some((a, b)) => s += &format!("minima ({a}, {b})\n"),
                    None => s += "minima unavailable\n",
                }
                s
            }
        })
    };
    match run() {
        Ok(s) => cfg.emit(&s).map(|_| EXIT_OK).unwrap_or_else(usage),
        Err(e) => usage(e),
    }
}

pub fn correspond_rows(cfg: &RunConfig) -> Result<Vec<(PrimeParams, Vec<CorrespondenceRow>)>, Error> {
    let mut out = Vec::new();
    for params in cfg.variants()? {
        let q = match cfg.q {
            Some(q) => q,
            None => default_q(&params)?,
        };
        out.push((params, correspondence_table(&params, q)?));
    }
    Ok(out)
}

pub fn cmd_correspond(cfg: &RunConfig) -> i32 {
    let tables = match correspond_rows(cfg) {
        Ok(t) => t,
        Err(e) => return usage(e),
    };
    let text = match cfg.output {
        Output::Json => json(&tables),
        _ => {
            let mut s = String::new();
            for (params, rows) in &tables {
                s += &format!("{:?} p={} c={}\n", params.variant, params.p, params.c);
                s += &render_table(rows, params.c);
                for r in rows {
                    for f in &r.findings {
                        s += &format!("  finding {}: {f}\n", r.form);
                    }
                }
            }
            s
        }
    };
    if let Err(e) = cfg.emit(&text) {
        return usage(e);
    }
    let violations = tables.iter().flat_map(|(_, rows)| rows).any(|r| r.findings.iter().any(|f| f.starts_with("THEOREM_VIOLATION")));
    if violations {
        EXIT_THEOREM
    } else {
        EXIT_OK
    }
}

pub fn cmd_graph(cfg: &RunConfig) -> i32 {
    let run = || -> Result<String, Error> {
        let params = PrimeParams::new(cfg.p, cfg.c, Variant::Lambda)?;
        let ell = cfg.ell.unwrap_or(2);
        let g = oriented_graph(&params, ell)?;
        Ok(match cfg.output {
            Output::Dot => g.to_dot(),
            Output::Json => serde_json::to_string_pretty(&g.to_json()).unwrap() + "\n",
            Output::Text => {
                let mut s = format!("oriented {ell}-isogeny graph, p={} c={}: {} nodes, {} edges\n", g.p, g.c, g.nodes.len(), g.edges.len());
                for i in 0..g.nodes.len() {
                    s += &format!("  {}\n", g.node_label(i));
                }
                for &(a, b) in &g.edges {
                    s += &format!("  {} -- {}\n", g.ids[a], g.ids[b]);
                }
                let k = Fp2::new(params.p as u64)?;
                let phi = cfg.phi3()?;
                s += "3-isogenies between supersingular j (Phi_3 multiplicities)\n";
                let js = supersingular_js(k)?;
                for &j1 in &js {
                    for &j2 in &js {
                        let n = isogeny_count(&phi, k, j1, j2);
                        if n > 0 {
                            s += &format!("  {j1} -> {j2}: {n}\n");
                        }
                    }
                }
                s
            }
        })
    };
    match run() {
        Ok(s) => cfg.emit(&s).map(|_| EXIT_OK).unwrap_or_else(usage),
        Err(e) => usage(e),
    }
}

/// H_D over Z, or its factorization mod p.
pub fn cmd_hilbert(cfg: &RunConfig, d: i64, modp: Option<i64>) -> i32 {
    let run = || -> Result<String, Error> {
        let h = hilbert_with(d, cfg.precision_override)?;
        match modp {
            None => Ok(match cfg.output {
                Output::Json => json(&*h),
                _ => {
                    let mut s = format!("H_{d}, degree {}, {} bits\n", h.degree(), h.precision);
                    for (i, c) in h.coeffs.iter().enumerate().rev() {
                        s += &format!("  X^{i}: {c}\n");
                    }
                    s
                }
            }),
            Some(p) => {
                let hp = hilbert_mod(d, p)?;
                let fs = factor_fp(&hp).ok_or(Error::BadDisc(d))?;
                Ok(match cfg.output {
                    Output::Json => {
                        let v: Vec<(String, usize)> = fs.iter().map(|(f, e)| (f.format(), *e)).collect();
                        json(&v)
                    }
                    _ => {
                        let mut s = format!("H_{d} mod {p} =");
                        for (f, e) in &fs {
                            s += &format!(" ({})^{e}", f.format());
                        }
                        s + "\n"
                    }
                })
            }
        }
    };
    match run() {
        Ok(s) => cfg.emit(&s).map(|_| EXIT_OK).unwrap_or_else(usage),
        Err(e) => usage(e),
    }
}

pub fn cmd_gz(cfg: &RunConfig, d1: i64, d2: i64, p: i64) -> i32 {
    match eichler_core::classpoly::resultant_vp(d1, d2, p) {
        Ok(v) => {
            let text = match cfg.output {
                Output::Json => json(&serde_json::json!({ "d1": d1, "d2": d2, "p": p, "vp": v })),
                _ => format!("{v}\n"),
            };
            cfg.emit(&text).map(|_| EXIT_OK).unwrap_or_else(usage)
        }
        Err(e) => usage(e),
    }
}

pub fn cmd_verify_paper(cfg: &RunConfig) -> i32 {
    let params = match PrimeParams::new(cfg.p, cfg.c, Variant::Lambda) {
        Ok(p) => p,
        Err(e) => return usage(e),
    };
    if let Err(e) = cfg.phi3() {
        return usage(e);
    }
    let scfg = suite::SuiteConfig { seed: cfg.seed, phi3: cfg.phi3.clone(), ..suite::SuiteConfig::new(params.p, params.c) };
    let lines = suite::run(&scfg, |l| println!("{l}"));
    match lines.iter().find(|l| !l.pass) {
        None => EXIT_OK,
        Some(l) => {
            eprintln!("first failing check: {} ({})", l.id, l.name);
            EXIT_THEOREM
        }
    }
}
