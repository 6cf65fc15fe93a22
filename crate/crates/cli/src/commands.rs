use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, Context, Result};
use bikoszul::constructions::{build_strongly_bikoszul, ext_sum_check, free_product};
use bikoszul::decomposition::{decompose, BlockPartition, GradedMatrix, MatrixRecord, Part};
use bikoszul::homology::{
    certify, ext_generated_in_degree0, minimal_resolution, product_rank, yoneda_product, BettiTable, ExtElement,
    Lifter, Resolution, Window,
};
use bikoszul::koszulity::{
    bikoszul_module_check, classify, obstruction, strongly_module_check, verify_ext_splitting, ClassificationReport,
    Pattern, StronglyVerdict, Verdict,
};
use bikoszul::rewrite::{complete, GroebnerBasis};
use bikoszul::{parse_algebra, parse_module, AlgebraPresentation, Error, ModulePresentation};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::{betti_input, Cli, Command, Format, Outcome};

const MIXED_SAMPLES: usize = 32;
const ASSOCIATIVITY_SAMPLES: usize = 16;

fn read(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn algebra(path: &Path) -> Result<AlgebraPresentation> {
    Ok(parse_algebra(&read(path)?).map_err(|e| located(e, path))?)
}

fn located(e: Error, path: &Path) -> anyhow::Error {
    anyhow::Error::new(e).context(path.display().to_string())
}

impl Cli {
    fn window(&self) -> Window {
        Window {
            length: self.length,
            degree_bound: self.degree_bound,
        }
    }

    fn module(&self, a: &AlgebraPresentation) -> Result<ModulePresentation> {
        match &self.module {
            Some(p) => Ok(parse_module(&read(p)?, a).map_err(|e| located(e, p))?),
            None => Ok(ModulePresentation::trivial(a)),
        }
    }

    fn emit<T: Serialize>(&self, value: &T, table: impl FnOnce() -> String) -> Result<()> {
        let text = match self.format {
            Format::Json => serde_json::to_string_pretty(value)?,
            Format::Table => table().trim_end().to_string(),
        };
        let mut out = std::io::stdout().lock();
        match writeln!(out, "{text}").and_then(|_| out.flush()) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => Ok(r?),
        }
    }
}

fn gb_for(a: &AlgebraPresentation, w: Window) -> Result<Arc<GroebnerBasis>> {
    Ok(Arc::new(complete(a, w.degree_bound)?))
}

fn resolve_with(cli: &Cli, a: &AlgebraPresentation, length: usize) -> Result<(Arc<GroebnerBasis>, Resolution)> {
    let gb = gb_for(a, cli.window())?;
    let m = cli.module(a)?;
    let res = minimal_resolution(&gb, &m, length, cli.degree_bound)?;
    Ok((gb, res))
}

fn window_line(w: Window) -> String {
    format!("window: L = {}, D = {}", w.length, w.degree_bound)
}

fn matrix_text(name: &str, r: &MatrixRecord) -> String {
    let mut s = format!("{name}: rows in degrees {:?}, columns in degrees {:?}\n", r.row_degrees, r.column_degrees);
    for row in &r.entries {
        let _ = writeln!(s, "  [ {} ]", row.join(", "));
    }
    s
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::MatchesInWindow { terminates_at: None } => "matches in window".into(),
        Verdict::MatchesInWindow { terminates_at: Some(n) } => {
            format!("matches in window (resolution stops before P_{n})")
        }
        Verdict::RefutedAt { n, observed, expected } => {
            format!("refuted at P_{n}: degrees {observed:?}, expected {expected:?}")
        }
        Verdict::NotApplicable { reason } => format!("not applicable ({reason})"),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Gb { algebra: p } => gb(cli, &algebra(p)?),
        Command::Hilbert { algebra: p } => hilbert(cli, &algebra(p)?),
        Command::Resolve { algebra: p } => resolve(cli, &algebra(p)?),
        Command::Betti { algebra: p } => betti(cli, &algebra(p)?),
        Command::Classify { algebra: p, betti } => classify_cmd(cli, p.as_deref(), betti.as_deref()),
        Command::Yoneda { algebra: p } => yoneda(cli, &algebra(p)?),
        Command::Obstruction { algebra: p } => obstruction_cmd(cli, &algebra(p)?),
        Command::CheckModule { algebra: p } => check_module(cli, &algebra(p)?),
        Command::Decompose { algebra: p } => decompose_cmd(cli, &algebra(p)?),
        Command::FreeProduct { first, second } => free_product_cmd(cli, &algebra(first)?, &algebra(second)?),
        Command::ConstructStrongly { first, second } => construct(cli, &algebra(first)?, &algebra(second)?),
    }
}

fn gb(cli: &Cli, a: &AlgebraPresentation) -> Result<Outcome> {
    let g = gb_for(a, cli.window())?;
    let rules: Vec<_> = g
        .rules()
        .iter()
        .map(|r| json!({ "lead": a.format_word(&r.lead), "tail": a.format_polynomial(&r.tail) }))
        .collect();
    let value = json!({
        "window": { "degree_bound": cli.degree_bound },
        "monomial": g.is_monomial(),
        "rules": rules,
    });
    cli.emit(&value, || {
        let mut s = String::new();
        for r in g.rules() {
            let _ = writeln!(s, "{} -> {}", a.format_word(&r.lead), a.format_polynomial(&r.tail));
        }
        let _ = write!(s, "window: D = {}", cli.degree_bound);
        s
    })?;
    Ok(Outcome::Positive)
}

fn hilbert(cli: &Cli, a: &AlgebraPresentation) -> Result<Outcome> {
    let g = gb_for(a, cli.window())?;
    let dims = g.hilbert_series();
    let value = json!({ "window": { "degree_bound": cli.degree_bound }, "dimensions": dims });
    cli.emit(&value, || {
        let mut s = String::new();
        for (j, n) in dims.iter().enumerate() {
            let _ = writeln!(s, "{j:>4} {n}");
        }
        let _ = write!(s, "window: D = {}", cli.degree_bound);
        s
    })?;
    Ok(Outcome::Positive)
}

fn differentials(res: &Resolution) -> Result<Vec<MatrixRecord>> {
    let alg = res.gb().algebra();
    (1..=res.length())
        .map(|m| Ok(GradedMatrix::from_differential(res, m)?.to_record(alg)))
        .collect()
}

fn resolve(cli: &Cli, a: &AlgebraPresentation) -> Result<Outcome> {
    let (_, res) = resolve_with(cli, a, cli.length)?;
    let table = BettiTable::from_resolution(&res);
    let certificate = certify(&res)?;
    let diffs = differentials(&res)?;
    let terms: Vec<_> = res.modules().iter().map(|q| &q.generators).collect();
    let value = json!({
        "window": cli.window(),
        "betti": table.records(),
        "terms": terms,
        "differentials": diffs,
        "certificate": certificate,
    });
    cli.emit(&value, || {
        let mut s = format!("{table}\n");
        for (m, r) in diffs.iter().enumerate() {
            s.push_str(&matrix_text(&format!("d_{}", m + 1), r));
        }
        let _ = write!(
            s,
            "certificate: {}",
            if certificate.holds() { "holds" } else { "FAILS" }
        );
        s
    })?;
    Ok(if certificate.holds() { Outcome::Positive } else { Outcome::Negative })
}

fn betti(cli: &Cli, a: &AlgebraPresentation) -> Result<Outcome> {
    let (_, res) = resolve_with(cli, a, cli.length)?;
    let table = BettiTable::from_resolution(&res);
    let value = json!({ "window": cli.window(), "betti": table.records() });
    cli.emit(&value, || table.to_string())?;
    Ok(Outcome::Positive)
}

fn classification_outcome(cli: &Cli, report: &ClassificationReport) -> Outcome {
    let ok = match cli.d {
        Some(d) => report.matches(Pattern::BiKoszul { d }),
        None => !report.matched().is_empty(),
    };
    if ok {
        Outcome::Positive
    } else {
        Outcome::Negative
    }
}

fn classify_cmd(cli: &Cli, p: Option<&Path>, betti: Option<&str>) -> Result<Outcome> {
    let table = match (p, betti) {
        (None, Some(src)) => betti_input::parse(&read(Path::new(src))?, cli.degree_bound)?,
        (Some(p), None) => {
            let (_, res) = resolve_with(cli, &algebra(p)?, cli.length)?;
            BettiTable::from_resolution(&res)
        }
        _ => return Err(anyhow!("give either an algebra file or --betti")),
    };
    let report = classify(&table);
    cli.emit(&report, || report.to_string())?;
    Ok(classification_outcome(cli, &report))
}

#[derive(Serialize)]
struct ProductRow {
    i1: usize,
    j1: usize,
    i2: usize,
    j2: usize,
    rank: usize,
    target_dim: usize,
}

#[derive(Serialize)]
struct Associativity {
    seed: Option<u64>,
    triples: Vec<[(usize, usize, usize); 3]>,
    holds: bool,
}

fn classes(res: &Resolution, from: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for (i, q) in res.modules().iter().enumerate().skip(from) {
        for g in 0..q.rank() {
            out.push((i, q.degree(g), g));
        }
    }
    out
}

fn class(res: &Resolution, (i, j, g): (usize, usize, usize)) -> ExtElement {
    ExtElement {
        i,
        j,
        coefficients: vec![(g, res.gb().algebra().field().one())],
    }
}

fn yoneda(cli: &Cli, a: &AlgebraPresentation) -> Result<Outcome> {
    let w = cli.window();
    let gb = gb_for(a, w)?;
    let res_k = minimal_resolution(&gb, &ModulePresentation::trivial(a), w.length, w.degree_bound)?;
    let module = cli.module.as_ref().map(|_| cli.module(a)).transpose()?;
    let res_m = match &module {
        Some(m) => minimal_resolution(&gb, m, w.length, w.degree_bound)?,
        None => res_k.clone(),
    };
    let tk = BettiTable::from_resolution(&res_k);
    let tm = BettiTable::from_resolution(&res_m);
    let lifter = Lifter::new(&res_k)?;
    let mut rows = Vec::new();
    for i1 in 1..=w.length {
        for j1 in tk.support(i1) {
            for i2 in 0..=w.length - i1 {
                for j2 in tm.support(i2) {
                    if (i2 == 0 && module.is_none()) || j1 + j2 > w.degree_bound {
                        continue;
                    }
                    rows.push(ProductRow {
                        i1,
                        j1,
                        i2,
                        j2,
                        rank: product_rank(&lifter, &res_m, (i1, j1), (i2, j2))?,
                        target_dim: tm.get(i1 + i2, j1 + j2),
                    });
                }
            }
        }
    }
    let generation = match &module {
        Some(_) => Some(ext_generated_in_degree0(&res_k, &res_m)?),
        None => None,
    };

    let mut triples: Vec<[(usize, usize, usize); 3]> = Vec::new();
    let all = classes(&res_k, 1);
    for &x in &all {
        for &y in &all {
            for &z in &all {
                if x.0 + y.0 + z.0 <= w.length && x.1 + y.1 + z.1 <= w.degree_bound {
                    triples.push([x, y, z]);
                }
            }
        }
    }
    if let Some(seed) = cli.seed {
        triples.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    triples.truncate(ASSOCIATIVITY_SAMPLES);
    let mut holds = true;
    for [x, y, z] in &triples {
        let (x, y, z) = (class(&res_k, *x), class(&res_k, *y), class(&res_k, *z));
        let left = yoneda_product(&yoneda_product(&x, &y, &res_k, &res_k)?, &z, &res_k, &res_k)?;
        let right = yoneda_product(&x, &yoneda_product(&y, &z, &res_k, &res_k)?, &res_k, &res_k)?;
        holds &= left == right;
    }
    let assoc = Associativity {
        seed: cli.seed,
        triples,
        holds,
    };

    let value = json!({
        "window": w,
        "products": rows,
        "generation": generation,
        "associativity": assoc,
    });
    cli.emit(&value, || {
        let mut s = String::from("E^i1_j1(A) . E^i2_j2(M): rank / dim target\n");
        for r in &rows {
            let _ = writeln!(
                s,
                "  ({}, {}) . ({}, {}): {} / {}",
                r.i1, r.j1, r.i2, r.j2, r.rank, r.target_dim
            );
        }
        if let Some(g) = &generation {
            let _ = writeln!(
                s,
                "E(M) generated in degree 0: {}",
                if g.all_generated() { "yes" } else { "no" }
            );
        }
        let _ = writeln!(
            s,
            "associativity on {} sampled triples: {}",
            assoc.triples.len(),
            if assoc.holds { "holds" } else { "FAILS" }
        );
        s.push_str(&window_line(w));
        s
    })?;
    let generated = generation.as_ref().is_none_or(|g| g.all_generated());
    Ok(if holds && generated { Outcome::Positive } else { Outcome::Negative })
}

fn obstruction_cmd(cli: &Cli, a: &AlgebraPresentation) -> Result<Outcome> {
    let w = cli.window();
    let gb = gb_for(a, w)?;
    let res = minimal_resolution(&gb, &ModulePresentation::trivial(a), w.length + 1, w.degree_bound)?;
    let mut table = BettiTable::new(w);
    for r in BettiTable::from_resolution(&res).records() {
        if r.i <= w.length {
            table.set(r.i, r.j, r.beta);
        }
    }
    let report = classify(&table);
    let Some(d) = report.bikoszul_parameter() else {
        let value = json!({ "window": w, "bikoszul": false, "classification": report });
        cli.emit(&value, || format!("not bi-Koszul in window\n{report}"))?;
        return Ok(Outcome::Negative);
    };
    if cli.d.is_some_and(|e| e != d) {
        let value = json!({ "window": w, "bikoszul": true, "d": d });
        cli.emit(&value, || format!("bi-Koszul with d = {d}, not {}\n{}", cli.d.unwrap_or(0), window_line(w)))?;
        return Ok(Outcome::Negative);
    }
    let mut reports = Vec::new();
    for n in (1..).take_while(|n| 3 * n + 2 <= w.length) {
        if 2 * n * d + d + 1 > w.degree_bound {
            break;
        }
        let mut r = obstruction(&res, n)?;
        r.window = w;
        reports.push(r);
    }
    if reports.is_empty() {
        let err = if w.length < 5 {
            Error::BeyondLength { needed: 5, length: w.length }
        } else {
            Error::OutsideWindow {
                degree: 3 * d + 1,
                bound: w.degree_bound,
            }
        };
        return Err(err.into());
    }
    let vanishes = reports.iter().all(|r| r.vanishes);
    let value = json!({ "window": w, "bikoszul": true, "d": d, "reports": reports, "vanishes": vanishes });
    cli.emit(&value, || {
        let mut s = format!("bi-Koszul d = {d}\n");
        for r in &reports {
            let route = match (&r.syzygy, r.routes_agree()) {
                (Some(sy), Some(agree)) => format!(
                    "; second syzygy degrees {:?}, syzygy degrees {:?}, routes {}",
                    sy.second_syzygy_degrees,
                    sy.syzygy_degrees,
                    if agree { "agree" } else { "DISAGREE" }
                ),
                _ => "; syzygy route outside window".into(),
            };
            let _ = writeln!(s, "n = {}: dim E^2_{} = {}{route}", r.n, r.degree, r.dimension);
        }
        s.push_str(&window_line(w));
        s
    })?;
    Ok(if vanishes { Outcome::Positive } else { Outcome::Negative })
}

fn module_d(cli: &Cli, a: &AlgebraPresentation) -> Result<usize> {
    if let Some(d) = cli.d {
        return Ok(d);
    }
    let gb = gb_for(a, cli.window())?;
    let res = minimal_resolution(&gb, &ModulePresentation::trivial(a), cli.length, cli.degree_bound)?;
    classify(&BettiTable::from_resolution(&res))
        .bikoszul_parameter()
        .ok_or_else(|| anyhow!("--d is required: the algebra is not bi-Koszul in the window"))
}

fn check_module(cli: &Cli, a: &AlgebraPresentation) -> Result<Outcome> {
    if cli.module.is_none() {
        return Err(anyhow!("check-module needs --module FILE"));
    }
    let w = cli.window();
    let d = module_d(cli, a)?;
    let m = cli.module(a)?;
    let gb = gb_for(a, w)?;
    let bi = bikoszul_module_check(&gb, &m, d, w)?;
    let strongly = strongly_module_check(&gb, &m, d, w)?;
    let mut splitting = Vec::new();
    if bi.verdict.matches() {
        for n in (0..).take_while(|n| 3 * n + 2 <= w.length && 2 * n * d + d + 1 <= w.degree_bound) {
            splitting.push(verify_ext_splitting(&gb, &m, d, n, w)?);
        }
    }
    let violated = matches!(strongly.verdict, StronglyVerdict::Violated { .. });
    let value = json!({
        "window": w,
        "d": d,
        "bikoszul": bi,
        "strongly": strongly,
        "splitting": splitting,
    });
    cli.emit(&value, || {
        let mut s = format!("bi-Koszul module (d = {d}): {}\n", verdict_text(&bi.verdict));
        let _ = writeln!(
            s,
            "strongly: {}",
            match &strongly.verdict {
                StronglyVerdict::HoldsInWindow => "holds in window".to_string(),
                StronglyVerdict::Violated { stage, degree, .. } =>
                    format!("violated at stage {stage}, degree {degree}"),
                StronglyVerdict::NotVerified { stage } => format!("not verified (stage {stage} fails its hypothesis)"),
                StronglyVerdict::NotBiKoszul => "not applicable (module is not bi-Koszul)".to_string(),
            }
        );
        for r in &splitting {
            let _ = writeln!(
                s,
                "Ext splitting at n = {}: {}",
                r.n,
                if r.holds() { "holds" } else { "FAILS" }
            );
        }
        s.push_str(&window_line(w));
        s
    })?;
    let ok = bi.verdict.matches() && !violated && splitting.iter().all(|r| r.holds());
    Ok(if ok { Outcome::Positive } else { Outcome::Negative })
}

fn part_json(a: &AlgebraPresentation, p: &Part) -> serde_json::Value {
    let diffs: Vec<MatrixRecord> = p.differentials.iter().map(|f| f.to_record(a)).collect();
    json!({
        "degrees": p.degrees(),
        "presentation": p.presentation.format(a),
        "pattern": p.pattern,
        "verdict": p.verdict,
        "differentials": diffs,
    })
}

fn part_text(s: &mut String, name: &str, a: &AlgebraPresentation, p: &Part) {
    let _ = writeln!(s, "{name}: generator degrees {:?}", p.degrees());
    let _ = writeln!(s, "  {}: {}", p.pattern, verdict_text(&p.verdict));
    for line in p.presentation.format(a).lines() {
        let _ = writeln!(s, "  {line}");
    }
    for (m, f) in p.differentials.iter().enumerate() {
        s.push_str(&matrix_text(&format!("  d_{}", m + 1), &f.to_record(a)));
    }
}

fn decompose_cmd(cli: &Cli, a: &AlgebraPresentation) -> Result<Outcome> {
    if cli.module.is_none() {
        return Err(anyhow!("decompose needs --module FILE"));
    }
    let w = cli.window();
    let d = module_d(cli, a)?;
    let partition: Option<BlockPartition> = match &cli.partition {
        Some(p) => Some(
            serde_json::from_str(&read(p)?).with_context(|| format!("{}: not a block partition", p.display()))?,
        ),
        None => None,
    };
    let (_, res) = resolve_with(cli, a, w.length)?;
    let result = decompose(&res, d, partition.as_ref())?;
    let couplings: Vec<MatrixRecord> = result.couplings.iter().map(|u| u.to_record(a)).collect();
    let value = json!({
        "window": result.window,
        "d": d,
        "partition": result.partition,
        "prime": part_json(a, &result.prime),
        "double_prime": part_json(a, &result.double_prime),
        "couplings": couplings,
        "transcript": result.transcript,
        "verified": result.verified(),
    });
    cli.emit(&value, || {
        let mut s = String::new();
        part_text(&mut s, "M'", a, &result.prime);
        part_text(&mut s, "M''", a, &result.double_prime);
        for (m, u) in couplings.iter().enumerate() {
            s.push_str(&matrix_text(&format!("lambda_{}", m + 1), u));
        }
        s.push_str("transcript:\n");
        for c in &result.transcript {
            let _ = writeln!(s, "  [{}] {}", if c.holds { "ok" } else { "FAIL" }, c.claim);
        }
        s.push_str(&window_line(result.window));
        s
    })?;
    Ok(if result.verified() { Outcome::Positive } else { Outcome::Negative })
}

fn free_product_cmd(cli: &Cli, a: &AlgebraPresentation, b: &AlgebraPresentation) -> Result<Outcome> {
    let w = cli.window();
    let product = free_product(a, b)?;
    let report = ext_sum_check(a, b, w, MIXED_SAMPLES)?;
    let value = json!({ "algebra": product.to_string(), "ext_sum": report, "holds": report.holds() });
    cli.emit(&value, || {
        let mut s = product.to_string();
        let bad: Vec<_> = report.rows.iter().filter(|r| !r.holds).collect();
        let _ = writeln!(
            s,
            "Betti additivity for 1 <= i <= L: {}",
            if bad.is_empty() { "holds".to_string() } else { format!("FAILS at {} entries", bad.len()) }
        );
        let vanish = report.mixed_products.iter().filter(|p| p.vanishes).count();
        let _ = writeln!(
            s,
            "mixed products vanishing: {vanish} of {} sampled",
            report.mixed_products.len()
        );
        s.push_str(&window_line(w));
        s
    })?;
    Ok(if report.holds() { Outcome::Positive } else { Outcome::Negative })
}

fn construct(cli: &Cli, a: &AlgebraPresentation, b: &AlgebraPresentation) -> Result<Outcome> {
    let w = cli.window();
    let built = build_strongly_bikoszul(a, b, cli.d, w)?;
    let value = json!({ "algebra": built.algebra.to_string(), "report": built, "strongly_in_window": built.strongly_in_window() });
    cli.emit(&value, || {
        let mut s = built.algebra.to_string();
        let _ = writeln!(s, "bi-Koszul d = {}: {}", built.d, verdict_text(&built.bikoszul));
        for r in &built.obstructions {
            let _ = writeln!(s, "obstruction n = {}: dim E^2_{} = {}", r.n, r.degree, r.dimension);
        }
        for r in &built.surjectivity {
            let _ = writeln!(
                s,
                "E^{} . E^{} onto E^{}_{}: rank {} of {}",
                r.i,
                3 * r.n,
                3 * r.n + r.i,
                r.degree,
                r.product_rank,
                r.beta
            );
        }
        let _ = writeln!(
            s,
            "strongly bi-Koszul in window: {}",
            if built.strongly_in_window() { "yes" } else { "no" }
        );
        s.push_str(&window_line(w));
        s
    })?;
    Ok(if built.strongly_in_window() { Outcome::Positive } else { Outcome::Negative })
}
