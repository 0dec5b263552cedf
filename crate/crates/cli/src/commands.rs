use std::fs;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use iwasawa_core::modules::{
    alternating_product, coinvariants_oracle, euler_char, h1_oracle, specialize, twist_scan,
    BivarPoly, CyclicPresentation, ModuleError, ResolutionData, ScanReport, WildCharacter,
};
use iwasawa_core::oracle::{
    brute_cardinality_report, brute_kernel_cardinality_report, OracleReport, TruncationBox,
};
use iwasawa_core::padic::{PadicContext, PadicInt};
use iwasawa_core::powseries::PadicPoly;
use iwasawa_core::primes::{
    arith_prime, bad_prime_set, ArithPrimeSpec, BadPrimeSet, HeightOnePrime, PrimeError,
};
use iwasawa_core::result::CardinalityResult;

use crate::args::GlobalOpts;
use crate::cache::FactorCache;
use crate::output::{failed, input, power, CliError, Report, Text};

pub struct Env {
    pub ctx: PadicContext,
    pub verify: bool,
    pub cache: FactorCache,
}

impl Env {
    pub fn new(g: &GlobalOpts) -> Result<Self, CliError> {
        let ctx = PadicContext::new(g.p, g.precision, g.guard).map_err(input)?;
        Ok(Env {
            ctx,
            verify: g.verify,
            cache: FactorCache::open(!g.verify),
        })
    }

    fn p(&self) -> u64 {
        self.ctx.p()
    }

    fn header(&self) -> Value {
        json!({
            "p": self.ctx.p(),
            "precision": self.ctx.precision(),
            "guard": self.ctx.guard(),
        })
    }

    fn lambda(&self, l: i64) -> PadicInt {
        self.ctx.int(l)
    }

    /// `F_0, ..., F_n` with certificates, through the cache.
    fn family(&mut self, lambda: &PadicInt, n: u32) -> Result<Vec<HeightOnePrime>, CliError> {
        let key = FactorCache::key(self.p(), self.ctx.precision(), lambda.residue(), n);
        if let Some(entries) = self.cache.get(&key) {
            let cached: Result<Vec<_>, _> = entries
                .iter()
                .map(|e| HeightOnePrime::from_json(&self.ctx, e))
                .collect();
            match cached {
                Ok(primes) if primes.len() == n as usize + 1 => return Ok(primes),
                _ => eprintln!("warning: discarding invalid cache entry {key}"),
            }
        }
        let set = bad_prime_set(lambda, n).map_err(failed)?;
        let p = self.p();
        self.cache
            .insert(key, set.primes.iter().map(|q| q.to_json(p)).collect());
        Ok(set.primes)
    }
}

fn prime_json(q: &HeightOnePrime, p: u64) -> Value {
    let j = q.to_json(p);
    json!({ "poly": j.poly, "cert": j.cert })
}

fn prime_degree(q: &HeightOnePrime) -> usize {
    q.poly().map_or(0, |g| g.degree())
}

fn prime_label(q: &HeightOnePrime, p: u64) -> String {
    let j = q.to_json(p);
    format!("{} [{}]", j.poly, j.cert)
}

fn result_json(r: &CardinalityResult) -> Value {
    serde_json::to_value(r).expect("results serialize")
}

fn parse_prime(ctx: &PadicContext, text: &str, assert: bool) -> Result<HeightOnePrime, CliError> {
    HeightOnePrime::parse(ctx, text, assert).map_err(|e| match e {
        PrimeError::Uncertified(m) => CliError::Input(format!(
            "{m}; pass --assert-irreducible to accept the prime without a certificate"
        )),
        other => input(format!("invalid prime {text:?}: {other}")),
    })
}

fn load_module(ctx: &PadicContext, path: &Path) -> Result<CyclicPresentation, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
    CyclicPresentation::from_json_str(ctx, &text)
        .map_err(|e| input(format!("{}: {e}", path.display())))
}

fn module_text(m: &CyclicPresentation) -> String {
    let rels: Vec<String> = m.relations().iter().map(|r| r.to_string()).collect();
    format!("Λ/({})", rels.join(", "))
}

pub fn factor(env: &mut Env, lambda: i64, n: u32) -> Result<Report, CliError> {
    let p = env.p();
    let lam = env.lambda(lambda);
    let primes = env.family(&lam, n)?;
    let set = BadPrimeSet {
        lambda: lam,
        n,
        primes,
    };
    let ok = set.reconstruction_holds();
    let mut t = Text::default();
    t.line(format!(
        "p = {p}, N = {}, lambda = {lambda}, n = {n}",
        env.ctx.precision()
    ));
    for (j, q) in set.primes.iter().enumerate() {
        t.line(format!(
            "F_{j} = {}  (degree {})",
            prime_label(q, p),
            prime_degree(q)
        ));
    }
    t.line(format!(
        "reconstruction (X+1)^({p}^{n}) - (1+{p}*{lambda})^({p}^{n}) = F_0*...*F_{n}: {}",
        if ok { "OK" } else { "FAILED" }
    ));
    let mut j = env.header();
    j["lambda"] = json!(lambda);
    j["n"] = json!(n);
    j["factors"] = set
        .primes
        .iter()
        .enumerate()
        .map(|(level, q)| {
            let mut v = prime_json(q, p);
            v["level"] = json!(level);
            v["degree"] = json!(prime_degree(q));
            v
        })
        .collect();
    j["reconstruction"] = json!(ok);
    Ok(Report {
        text: t.finish(),
        json: j,
        determinate: ok,
    })
}

pub fn bad_primes(env: &mut Env, lambda: i64, n_max: u32) -> Result<Report, CliError> {
    let p = env.p();
    let lam = env.lambda(lambda);
    let family = env.family(&lam, n_max)?;
    let sets: Vec<BadPrimeSet> = (0..=n_max)
        .map(|n| BadPrimeSet {
            lambda: lam,
            n,
            primes: family[..=n as usize].to_vec(),
        })
        .collect();
    let mut t = Text::default();
    t.line(format!(
        "p = {p}, N = {}, lambda = {lambda}, levels 0..={n_max}",
        env.ctx.precision()
    ));
    let mut levels = Vec::new();
    let mut all_ok = true;
    for set in &sets {
        let size = set.primes.len();
        let newest = set.primes.last().expect("level sets are nonempty");
        let rec = set.reconstruction_holds();
        all_ok &= rec;
        t.line(format!(
            "level {}: {size} prime{}; new {} of degree {}; reconstruction {}",
            set.n,
            if size == 1 { "" } else { "s" },
            prime_label(newest, p),
            prime_degree(newest),
            if rec { "OK" } else { "FAILED" }
        ));
        for q in &set.primes {
            t.line(format!("  {}", prime_label(q, p)));
        }
        let mut new = prime_json(newest, p);
        new["degree"] = json!(prime_degree(newest));
        levels.push(json!({
            "level": set.n,
            "size": size,
            "primes": set.primes.iter().map(|q| prime_json(q, p)).collect::<Vec<_>>(),
            "new": new,
            "reconstruction": rec,
        }));
    }
    let mut growth = Vec::new();
    for w in sets.windows(2) {
        let strict = w[0].is_strict_subset_of(&w[1]);
        all_ok &= strict;
        t.line(format!(
            "strict growth: {} (level {} -> {})",
            if strict { "OK" } else { "FAILED" },
            w[0].n,
            w[1].n
        ));
        growth.push(json!({ "from": w[0].n, "to": w[1].n, "strict": strict }));
    }
    let mut j = env.header();
    j["lambda"] = json!(lambda);
    j["n_max"] = json!(n_max);
    j["levels"] = json!(levels);
    j["growth"] = json!(growth);
    Ok(Report {
        text: t.finish(),
        json: j,
        determinate: all_ok,
    })
}

/// `--verify` agreement: both paths finite with equal exponents.
fn agrees(fast: &CardinalityResult, oracle: &CardinalityResult) -> bool {
    matches!((fast.exponent(), oracle.exponent()), (Some(a), Some(b)) if a == b)
}

pub fn euler(
    env: &mut Env,
    module: &Path,
    lambda: i64,
    prime: &str,
    n: u32,
    assert_irreducible: bool,
) -> Result<Report, CliError> {
    let p = env.p();
    let m = load_module(&env.ctx, module)?;
    let q = parse_prime(&env.ctx, prime, assert_irreducible)?;
    let twisted = m.twist(&WildCharacter::new(env.lambda(lambda)));
    let sm = specialize(&twisted, &q).map_err(input)?;
    let e = euler_char(&sm, n);

    let mut t = Text::default();
    t.line(format!("module: {}", module_text(&m)));
    t.line(format!(
        "twisted by lambda = {lambda}: {}",
        module_text(&twisted)
    ));
    t.line(format!("prime: {}, n = {n}", prime_label(&q, p)));
    t.line(format!("h0 = {}", e.h0.cell(p)));
    t.line(format!("h1 = {}", e.h1.cell(p)));
    match e.chi_exponent {
        Some(v) => t.line(format!("chi = {}", power(p, v))),
        None => {
            t.line("chi undefined");
            for (name, r) in [("coinvariants", &e.h0), ("H1", &e.h1)] {
                if !r.is_finite() {
                    t.line(format!("{name} {}", r.describe(p)));
                }
            }
        }
    }
    let mut determinate = e.chi_exponent.is_some();

    let mut j = env.header();
    j["lambda"] = json!(lambda);
    j["prime"] = prime_json(&q, p);
    j["n"] = json!(n);
    j["relations"] = (0..sm.relations().len())
        .map(|i| json!(sm.relation_text(i)))
        .collect();
    j["h0"] = result_json(&e.h0);
    j["h1"] = result_json(&e.h1);
    j["chi_exponent"] = json!(e.chi_exponent);

    if env.verify {
        let (o0, o1) = (coinvariants_oracle(&sm, n), h1_oracle(&sm, n));
        let agreement = agrees(&e.h0, &o0) && agrees(&e.h1, &o1);
        t.line(format!("oracle: h0 = {}, h1 = {}", o0.cell(p), o1.cell(p)));
        for (name, r) in [("h0", &o0), ("h1", &o1)] {
            if !r.is_finite() {
                t.line(format!("oracle {name} {}", r.describe(p)));
            }
        }
        t.line(format!(
            "agreement: {}",
            if agreement { "yes" } else { "no" }
        ));
        j["oracle"] = json!({
            "h0": result_json(&o0),
            "h1": result_json(&o1),
            "agreement": agreement,
        });
        determinate &= agreement;
    }
    Ok(Report {
        text: t.finish(),
        json: j,
        determinate,
    })
}

/// `"a..b"` (inclusive) or `"l1,l2,..."`.
pub fn parse_lambdas(text: &str) -> Result<Vec<i64>, CliError> {
    let text = text.trim();
    let num = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| input(format!("invalid lambda {:?}", s.trim())))
    };
    let out: Vec<i64> = if let Some((a, b)) = text.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        (num(a)?..=num(b)?).collect()
    } else if text.is_empty() {
        Vec::new()
    } else {
        text.split(',').map(num).collect::<Result<_, _>>()?
    };
    if out.is_empty() {
        return Err(input(format!("lambda range {text:?} is empty")));
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
pub fn scan(
    env: &mut Env,
    module: &Path,
    lambdas: &str,
    primes: &str,
    k_max: u32,
    r_max: u32,
    n_max: u32,
    serial: bool,
    assert_irreducible: bool,
) -> Result<Report, CliError> {
    let m = load_module(&env.ctx, module)?;
    let lambda_list = parse_lambdas(lambdas)?;
    let prime_list: Vec<HeightOnePrime> = if primes.trim() == "auto" {
        if k_max == 0 {
            return Err(input("--k-max must be at least 1"));
        }
        let mut out = Vec::new();
        for r in 0..=r_max {
            for k in 1..=k_max {
                out.push(
                    arith_prime(&env.ctx, ArithPrimeSpec { k, r }).map_err(|e| match e {
                        PrimeError::InvalidSpec(m) => CliError::Input(m),
                        other => failed(other),
                    })?,
                );
            }
        }
        out
    } else {
        primes
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|s| parse_prime(&env.ctx, s, assert_irreducible))
            .collect::<Result<_, _>>()?
    };
    if prime_list.is_empty() {
        return Err(input("no primes given"));
    }
    let lam: Vec<PadicInt> = lambda_list.iter().map(|&l| env.lambda(l)).collect();
    let report = twist_scan(&m, &lam, &prime_list, n_max, serial).map_err(|e| match e {
        ModuleError::PPrime | ModuleError::EmptyScan => input(e),
        other => failed(other),
    })?;

    let oracle_cells = if env.verify {
        Some(scan_oracle(&m, &lam, &prime_list, &report)?)
    } else {
        None
    };
    Ok(render_scan(
        env,
        module,
        &m,
        &report,
        oracle_cells.as_deref(),
        lambda_list,
    ))
}

fn scan_oracle(
    m: &CyclicPresentation,
    lambdas: &[PadicInt],
    primes: &[HeightOnePrime],
    report: &ScanReport,
) -> Result<Vec<Vec<CardinalityResult>>, CliError> {
    lambdas
        .iter()
        .zip(&report.rows)
        .map(|(l, row)| {
            let twisted = m.twist(&WildCharacter::new(*l));
            row.cells
                .iter()
                .map(|c| {
                    let sm = specialize(&twisted, &primes[c.prime]).map_err(failed)?;
                    Ok(coinvariants_oracle(&sm, c.level))
                })
                .collect()
        })
        .collect()
}

fn render_scan(
    env: &Env,
    module: &Path,
    m: &CyclicPresentation,
    report: &ScanReport,
    oracle: Option<&[Vec<CardinalityResult>]>,
    lambdas: Vec<i64>,
) -> Report {
    let p = env.p();
    let mut t = Text::default();
    t.line(format!("module {}: {}", module.display(), module_text(m)));
    t.line(format!(
        "p = {p}, N = {}, levels 0..={}",
        env.ctx.precision(),
        report.n_max
    ));
    for (i, q) in report.primes.iter().enumerate() {
        t.line(format!("Q{} = {} [{}]", i + 1, q.poly, q.cert));
    }
    let mut header = vec!["lambda".to_string()];
    for i in 0..report.primes.len() {
        for n in 0..=report.n_max {
            header.push(format!("Q{} n={n}", i + 1));
        }
    }
    header.push("all finite".to_string());
    let mut rows = Vec::new();
    let mut undetermined = false;
    let mut agreeing = 0usize;
    let mut total = 0usize;
    let mut json_rows = Vec::new();
    for (i, row) in report.rows.iter().enumerate() {
        let mut cells = vec![lambdas[i].to_string()];
        let mut json_cells = Vec::new();
        for (k, c) in row.cells.iter().enumerate() {
            undetermined |= matches!(c.result, CardinalityResult::Undetermined { .. });
            let mut jc = json!({
                "prime": c.prime,
                "level": c.level,
                "result": result_json(&c.result),
            });
            let mut shown = c.result.cell(p);
            if let Some(o) = oracle {
                let o = &o[i][k];
                let ok = agrees(&c.result, o);
                total += 1;
                agreeing += ok as usize;
                if !ok {
                    shown.push_str(&format!(" (oracle {})", o.cell(p)));
                }
                jc["oracle"] = result_json(o);
                jc["agreement"] = json!(ok);
            }
            cells.push(shown);
            json_cells.push(jc);
        }
        cells.push(if row.all_finite { "yes" } else { "no" }.to_string());
        rows.push(cells);
        json_rows.push(json!({
            "lambda": row.lambda,
            "cells": json_cells,
            "all_finite": row.all_finite,
        }));
    }
    t.table(&header, &rows);
    if report.admissible.is_empty() {
        t.line("no admissible twist among candidates");
    } else {
        let list: Vec<String> = report.admissible.iter().map(|l| l.to_string()).collect();
        t.line(format!("fully finite twists: lambda = {}", list.join(", ")));
    }
    if oracle.is_some() {
        t.line(format!("oracle agreement: {agreeing}/{total} cells"));
    }
    let mut j = env.header();
    j["n_max"] = json!(report.n_max);
    j["primes"] = report
        .primes
        .iter()
        .map(|q| json!({ "poly": q.poly, "cert": q.cert }))
        .collect();
    j["rows"] = json!(json_rows);
    j["admissible"] = json!(report.admissible);
    Report {
        text: t.finish(),
        json: j,
        determinate: !undetermined,
    }
}

#[derive(Debug, Deserialize)]
struct ResolutionFile {
    #[serde(default)]
    p: Option<u64>,
    elements: Vec<String>,
}

pub fn alt_product(
    env: &mut Env,
    file: &Path,
    prime: &str,
    assert_irreducible: bool,
) -> Result<Report, CliError> {
    let p = env.p();
    let text = fs::read_to_string(file)
        .map_err(|e| input(format!("cannot read {}: {e}", file.display())))?;
    let parsed: ResolutionFile =
        serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", file.display())))?;
    if let Some(fp) = parsed.p.filter(|&fp| fp != p) {
        return Err(input(format!(
            "{}: file is for p = {fp}, but the run uses p = {p}",
            file.display()
        )));
    }
    let elements = parsed
        .elements
        .iter()
        .enumerate()
        .map(|(i, s)| {
            PadicPoly::parse(&env.ctx, s).map_err(|e| input(format!("element {}: {e}", i + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let q = parse_prime(&env.ctx, prime, assert_irreducible)?;
    let res = ResolutionData::new(elements).map_err(input)?;
    let a = match alternating_product(&res, &q) {
        Ok(a) => a,
        Err(ModuleError::NonFiniteFactor { index, result }) => {
            return Err(CliError::Failed(format!(
                "element {index} ({}): Z_p[[X]]/(Q, f_{index}) is {}",
                parsed.elements[index - 1].trim(),
                result.describe(p)
            )))
        }
        Err(e) => return Err(input(e)),
    };
    let mut t = Text::default();
    t.line(format!("prime: {}", prime_label(&q, p)));
    let rows: Vec<Vec<String>> = a
        .exponents
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            vec![
                (i + 1).to_string(),
                res.elements()[i].to_string(),
                if i % 2 == 0 { "+" } else { "-" }.to_string(),
                power(p, v as i64),
            ]
        })
        .collect();
    t.table(
        &[
            "i".into(),
            "f_i".into(),
            "sign".into(),
            "#Z_p[[X]]/(Q, f_i)".into(),
        ],
        &rows,
    );
    t.line(format!(
        "alternating product = {} (signed exponent {:+})",
        power(p, a.signed_exponent),
        a.signed_exponent
    ));
    let mut j = env.header();
    j["prime"] = prime_json(&q, p);
    j["elements"] = res
        .elements()
        .iter()
        .zip(&a.exponents)
        .enumerate()
        .map(|(i, (f, v))| json!({ "index": i + 1, "poly": f.to_string(), "exponent": v }))
        .collect();
    j["signed_exponent"] = json!(a.signed_exponent);
    Ok(Report {
        text: t.finish(),
        json: j,
        determinate: true,
    })
}

pub fn oracle(env: &mut Env, ideal: &str, kernel: Option<&str>) -> Result<Report, CliError> {
    let p = env.p();
    let gens = ideal
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| BivarPoly::parse(&env.ctx, s).map_err(|e| input(format!("{:?}: {e}", s.trim()))))
        .collect::<Result<Vec<_>, _>>()?;
    let mult = kernel
        .map(|s| BivarPoly::parse(&env.ctx, s).map_err(|e| input(format!("{s:?}: {e}"))))
        .transpose()?;
    let b = TruncationBox::for_ideal(&gens).map_err(input)?;
    let rep: OracleReport = match &mult {
        None => brute_cardinality_report(&gens, &b),
        Some(m) => brute_kernel_cardinality_report(&gens, m, &b),
    }
    .map_err(input)?;

    let rendered: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
    let mut t = Text::default();
    t.line(format!("ideal: ({})", rendered.join(", ")));
    if let Some(m) = &mult {
        t.line(format!("kernel of multiplication by {m}"));
    }
    t.line(format!(
        "box: a = {}, X-degree < {}, T-degree < {}",
        b.a, b.bx, b.bt
    ));
    t.line(format!("result: {}", rep.result));
    if let Some(v) = rep.result.exponent() {
        t.line(format!("cardinality: {}", power(p, v as i64)));
    }
    t.line(format!("trace: {}", rep.trace()));
    let mut j = env.header();
    j["ideal"] = json!(rendered);
    if let Some(m) = &mult {
        j["kernel_of"] = json!(m.to_string());
    }
    j["box"] = json!({ "a": b.a, "bx": b.bx, "bt": b.bt });
    j["result"] = result_json(&rep.result);
    j["runs"] = serde_json::to_value(&rep.runs).expect("runs serialize");
    j["trace"] = json!(rep.trace());
    Ok(Report {
        text: t.finish(),
        determinate: rep.result.is_finite(),
        json: j,
    })
}

pub fn arith(env: &mut Env, k: u32, r: u32) -> Result<Report, CliError> {
    let p = env.p();
    let q = arith_prime(&env.ctx, ArithPrimeSpec { k, r }).map_err(|e| match e {
        PrimeError::InvalidSpec(m) => CliError::Input(m),
        other => failed(other),
    })?;
    let g = q.poly().expect("arithmetic primes are distinguished");
    let mut t = Text::default();
    t.line(format!("k = {k}, r = {r}, p = {p}"));
    t.line(format!(
        "Q = {}  (degree {})",
        prime_label(&q, p),
        g.degree()
    ));
    let mut j = env.header();
    j["k"] = json!(k);
    j["r"] = json!(r);
    j["prime"] = prime_json(&q, p);
    j["degree"] = json!(g.degree());
    let mut ok = true;
    if r == 0 {
        let point = env.ctx.int(1 + p as i64).pow(k as u64) - env.ctx.one();
        let vanishes = g.as_poly().eval(&point).is_zero();
        ok = vanishes;
        t.line(format!(
            "Q((1+{p})^{k} - 1) = 0 mod {p}^{}: {}",
            env.ctx.precision(),
            if vanishes { "OK" } else { "FAILED" }
        ));
        j["vanishes_at_specialization"] = json!(vanishes);
    }
    Ok(Report {
        text: t.finish(),
        json: j,
        determinate: ok,
    })
}
