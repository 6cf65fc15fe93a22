//! Splitting a non-pure resolution into two pure ones.
//!
//! A block partition splits the generators of each `Q_m` into a prime and a
//! double-prime part. Every differential then reads
//! `F_m = (F′ 0; U F″)` with rows and columns ordered prime first. When each
//! coupling block `U` lies in the row module of `F′` (admissibility), the
//! prime and double-prime blocks are themselves resolutions, of
//! `M′ = ε(Q′_0)` and `M″ = M/M′`.
//!
//! Adjacent steps share one partition of `Q_m`, as columns of `F_{m+1}` and
//! rows of `F_m`, so block products are always defined.

mod matrix;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{
    self, certify, present_degreewise, BettiRecord, BettiTable, DegreewiseModule, FreeModule, Homogeneous,
    Resolution, Window,
};
use crate::koszulity::{check_pattern, Pattern, Verdict};
use crate::presentation::{ModulePresentation, Polynomial};
use crate::rewrite::GroebnerBasis;

pub use matrix::{
    is_admissible, matrix_representation, AdmissibilityCertificate, GradedMatrix, MatrixRecord, RowCertificate,
};

pub const DEFAULT_PARTITION_CAP: usize = 12;

/// Generator indices of `Q_m` on each side.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepPartition {
    pub prime: Vec<usize>,
    pub double_prime: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPartition {
    pub steps: Vec<StepPartition>,
}

impl StepPartition {
    fn from_mask(rank: usize, mask: u64) -> Self {
        let (double_prime, prime): (Vec<usize>, Vec<usize>) = (0..rank).partition(|&i| mask >> i & 1 == 1);
        StepPartition { prime, double_prime }
    }

    fn covers(&self, rank: usize) -> bool {
        let mut all: Vec<usize> = self.prime.iter().chain(&self.double_prime).copied().collect();
        all.sort_unstable();
        all == (0..rank).collect::<Vec<_>>()
    }
}

/// The four blocks of a matrix under a row and a column partition.
#[derive(Clone, Debug)]
pub struct BlockSplit {
    pub prime: GradedMatrix,
    pub coupling: GradedMatrix,
    pub double_prime: GradedMatrix,
    /// Prime rows vanish on double-prime columns.
    pub triangular: bool,
}

pub fn split_blocks(f: &GradedMatrix, rows: &StepPartition, columns: &StepPartition) -> BlockSplit {
    BlockSplit {
        prime: f.submatrix(&rows.prime, &columns.prime),
        coupling: f.submatrix(&rows.double_prime, &columns.prime),
        double_prime: f.submatrix(&rows.double_prime, &columns.double_prime),
        triangular: f.submatrix(&rows.prime, &columns.double_prime).is_zero(),
    }
}

#[derive(Clone, Debug)]
pub struct SplitTriple {
    pub f: BlockSplit,
    pub g: BlockSplit,
    /// `λ` witnesses for `F` and `G`.
    pub f_witnesses: AdmissibilityCertificate,
    pub g_witnesses: AdmissibilityCertificate,
    /// Degrees `≤` the window where the prime (resp. double-prime) row fails to
    /// be exact at the middle term.
    pub prime_defects: Vec<usize>,
    pub double_prime_defects: Vec<usize>,
}

impl SplitTriple {
    pub fn exact(&self) -> bool {
        self.prime_defects.is_empty() && self.double_prime_defects.is_empty()
    }
}

/// Splits `M →F N →G P` along partitions of `M`, `N`, `P` and checks that
/// the prime and double-prime rows are exact at `N` in degrees `≤ bound`.
pub fn split_triple(
    gb: &GroebnerBasis,
    f: &GradedMatrix,
    g: &GradedMatrix,
    parts: [&StepPartition; 3],
    bound: usize,
) -> Result<SplitTriple> {
    if f.columns() != g.rows() {
        return Err(Error::Precondition("F and G are not composable".into()));
    }
    if !f.compose(gb, g).is_zero() {
        return Err(Error::Precondition("G ∘ F is not zero".into()));
    }
    let fs = split_blocks(f, parts[0], parts[1]);
    let gs = split_blocks(g, parts[1], parts[2]);
    if !fs.triangular || !gs.triangular {
        return Err(Error::Precondition("a prime row meets a double-prime column".into()));
    }
    let f_witnesses = is_admissible(gb, &fs.prime, &fs.coupling)?;
    let g_witnesses = is_admissible(gb, &gs.prime, &gs.coupling)?;
    for (step, cert) in [(0, &f_witnesses), (1, &g_witnesses)] {
        if let Some((row, degree)) = cert.first_failure() {
            return Err(Error::NotAdmissible { step, row, degree });
        }
    }
    let mut prime_defects = Vec::new();
    let mut double_prime_defects = Vec::new();
    for t in 0..=bound {
        for (a, b, defects) in [
            (&fs.prime, &gs.prime, &mut prime_defects),
            (&fs.double_prime, &gs.double_prime, &mut double_prime_defects),
        ] {
            let middle = b.source();
            let dim: usize = (0..gb.algebra().vertices() as u16)
                .map(|v| middle.slice_dim(gb, t, v))
                .sum();
            if dim - b.rank_in_degree(gb, t)? != a.rank_in_degree(gb, t)? {
                defects.push(t);
            }
        }
    }
    Ok(SplitTriple {
        f: fs,
        g: gs,
        f_witnesses,
        g_witnesses,
        prime_defects,
        double_prime_defects,
    })
}

/// Why a partition fails at step `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
enum StepFailure {
    Shape,
    DegreeSplit,
    NotTriangular { row: usize },
    NotAdmissible { row: usize, degree: usize },
}

fn forced_split(res: &Resolution, m: usize, d: usize) -> StepPartition {
    let low = 2 * (m / 3) * d + d;
    let (prime, double_prime) = (0..res.module(m).rank()).partition(|&g| res.module(m).degree(g) == low);
    StepPartition { prime, double_prime }
}

struct StepCheck {
    split: Option<BlockSplit>,
    witnesses: Option<AdmissibilityCertificate>,
}

fn check_step(
    res: &Resolution,
    d: usize,
    matrices: &[GradedMatrix],
    parts: &[StepPartition],
    m: usize,
) -> Result<std::result::Result<StepCheck, StepFailure>> {
    let part = &parts[m];
    if !part.covers(res.module(m).rank()) {
        return Ok(Err(StepFailure::Shape));
    }
    if m % 3 == 2 {
        let forced = forced_split(res, m, d);
        let mut p = part.prime.clone();
        p.sort_unstable();
        if p != forced.prime {
            return Ok(Err(StepFailure::DegreeSplit));
        }
    }
    if m == 0 {
        return Ok(Ok(StepCheck {
            split: None,
            witnesses: None,
        }));
    }
    let split = split_blocks(&matrices[m - 1], part, &parts[m - 1]);
    if !split.triangular {
        let row = part
            .prime
            .iter()
            .copied()
            .find(|&i| {
                matrices[m - 1]
                    .row(i)
                    .terms()
                    .iter()
                    .any(|(j, _)| parts[m - 1].double_prime.contains(j))
            })
            .unwrap_or(0);
        return Ok(Err(StepFailure::NotTriangular { row }));
    }
    let cert = is_admissible(res.gb(), &split.prime, &split.coupling)?;
    if let Some((i, degree)) = cert.first_failure() {
        return Ok(Err(StepFailure::NotAdmissible {
            row: part.double_prime[i],
            degree,
        }));
    }
    Ok(Ok(StepCheck {
        split: Some(split),
        witnesses: Some(cert),
    }))
}

fn differentials(res: &Resolution) -> Result<Vec<GradedMatrix>> {
    (1..=res.length()).map(|m| GradedMatrix::from_differential(res, m)).collect()
}

/// Depth-first search over partitions, step by step; at each free step the
/// double-prime sets are enumerated as bitmasks in increasing order.
pub fn search_partition(res: &Resolution, d: usize, cap: usize) -> Result<BlockPartition> {
    for (m, q) in res.modules().iter().enumerate() {
        if q.rank() > cap {
            return Err(Error::ResourceLimit {
                what: format!("partition search over the {} generators of Q_{m}", q.rank()),
                cap,
            });
        }
    }
    let matrices = differentials(res)?;
    let mut parts: Vec<StepPartition> = Vec::new();
    let mut deepest: (usize, String) = (0, String::new());
    if search(res, d, &matrices, &mut parts, &mut deepest)? {
        return Ok(BlockPartition { steps: parts });
    }
    Err(Error::NoPartition(format!("search fails at step {}: {}", deepest.0, deepest.1)))
}

fn search(
    res: &Resolution,
    d: usize,
    matrices: &[GradedMatrix],
    parts: &mut Vec<StepPartition>,
    deepest: &mut (usize, String),
) -> Result<bool> {
    let m = parts.len();
    if m > res.length() {
        return Ok(true);
    }
    let rank = res.module(m).rank();
    let candidates: Vec<StepPartition> = if m % 3 == 2 {
        vec![forced_split(res, m, d)]
    } else {
        (0..1u64 << rank).map(|mask| StepPartition::from_mask(rank, mask)).collect()
    };
    for c in candidates {
        parts.push(c);
        match check_step(res, d, matrices, parts, m)? {
            Ok(_) => {
                if search(res, d, matrices, parts, deepest)? {
                    return Ok(true);
                }
            }
            Err(f) => {
                if m >= deepest.0 {
                    *deepest = (m, format!("{f:?}"));
                }
            }
        }
        parts.pop();
    }
    Ok(false)
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub claim: String,
    pub holds: bool,
}

/// One of the two pure resolutions.
#[derive(Clone, Debug)]
pub struct Part {
    pub modules: Vec<FreeModule>,
    /// `differentials[m - 1]` is `∂_m`.
    pub differentials: Vec<GradedMatrix>,
    pub presentation: ModulePresentation,
    pub pattern: Pattern,
    pub verdict: Verdict,
}

impl Part {
    pub fn degrees(&self) -> Vec<Vec<usize>> {
        self.modules.iter().map(FreeModule::degrees).collect()
    }

    pub fn betti(&self, window: Window) -> BettiTable {
        let mut t = BettiTable::new(window);
        for (i, q) in self.modules.iter().enumerate() {
            for j in q.degrees() {
                t.set(i, j, t.get(i, j) + 1);
            }
        }
        t
    }
}

#[derive(Clone, Debug)]
pub struct DecompositionResult {
    pub d: usize,
    pub partition: BlockPartition,
    pub prime: Part,
    pub double_prime: Part,
    /// `U_m`, the matrices of the maps `λ_m`.
    pub couplings: Vec<GradedMatrix>,
    pub witnesses: Vec<AdmissibilityCertificate>,
    pub transcript: Vec<Check>,
    pub window: Window,
}

impl DecompositionResult {
    pub fn verified(&self) -> bool {
        self.transcript.iter().all(|c| c.holds)
    }
}

fn part_presentation(gb: &GroebnerBasis, q0: &FreeModule, f1: Option<&GradedMatrix>) -> Result<ModulePresentation> {
    let rows = f1.map_or_else(Vec::new, |f| {
        f.entries()
            .iter()
            .map(|x| {
                (0..q0.rank())
                    .map(|g| x.entry(g).cloned().unwrap_or_else(Polynomial::zero))
                    .collect()
            })
            .collect()
    });
    ModulePresentation::new(gb.algebra(), q0.generators.clone(), rows)
}

/// `dim ε(Q′_0)_t` inside `M`, for the prime generators of `Q_0`.
fn image_dims(res: &Resolution, prime: &[usize]) -> Result<Vec<usize>> {
    let gb = res.gb();
    let bound = res.bound();
    let rel = DegreewiseModule::from_generators(gb, res.ambient().clone(), res.relations(), bound)?;
    let q0 = res.module(0);
    let gens: Vec<Homogeneous> = prime
        .iter()
        .map(|&g| Homogeneous {
            degree: q0.degree(g),
            element: res.differential(0)[g].clone(),
        })
        .collect();
    let image = DegreewiseModule::from_generators(gb, res.ambient().clone(), &gens, bound)?.sum(&rel)?;
    Ok((0..=bound).map(|t| image.dim(t) - rel.dim(t)).collect())
}

fn build_part(
    res: &Resolution,
    matrices: &[GradedMatrix],
    partition: &BlockPartition,
    pick: impl Fn(&StepPartition) -> &Vec<usize>,
    pattern: Pattern,
) -> Result<Part> {
    let gb = res.gb();
    let modules: Vec<FreeModule> = partition
        .steps
        .iter()
        .enumerate()
        .map(|(m, p)| FreeModule::new(pick(p).iter().map(|&g| res.module(m).generators[g]).collect()))
        .collect();
    let differentials: Vec<GradedMatrix> = (1..partition.steps.len())
        .map(|m| matrices[m - 1].submatrix(pick(&partition.steps[m]), pick(&partition.steps[m - 1])))
        .collect();
    let presentation = part_presentation(gb, &modules[0], differentials.first())?;
    let mut part = Part {
        modules,
        differentials,
        presentation,
        pattern,
        verdict: Verdict::NotApplicable { reason: String::new() },
    };
    let window = Window {
        length: res.length(),
        degree_bound: res.bound(),
    };
    part.verdict = check_pattern(&part.betti(window), pattern);
    Ok(part)
}

/// Exactness of `Q_{m+1} → Q_m → Q_{m-1}` for `1 ≤ m < L`, degree by degree.
fn complex_defects(gb: &GroebnerBasis, part: &Part, bound: usize) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for m in 1..part.differentials.len() {
        for t in 0..=bound {
            let dim: usize = (0..gb.algebra().vertices() as u16)
                .map(|v| part.modules[m].slice_dim(gb, t, v))
                .sum();
            let kernel = dim - part.differentials[m - 1].rank_in_degree(gb, t)?;
            if kernel != part.differentials[m].rank_in_degree(gb, t)? {
                out.push((m, t));
            }
        }
    }
    Ok(out)
}

/// Splits the resolution of a bi-Koszul module along `partition` (searched
/// when absent) and verifies both halves and `0 → M′ → M → M″ → 0`.
pub fn decompose(res: &Resolution, d: usize, partition: Option<&BlockPartition>) -> Result<DecompositionResult> {
    let gb: &Arc<GroebnerBasis> = res.gb();
    if gb.algebra().is_quiver() {
        return Err(Error::Precondition("decomposition requires a connected algebra".into()));
    }
    let window = Window {
        length: res.length(),
        degree_bound: res.bound(),
    };
    if let Verdict::RefutedAt { n, .. } = check_pattern(&BettiTable::from_resolution(res), Pattern::BiKoszul { d }) {
        return Err(Error::Precondition(format!("Q_{n} breaks the bi-Koszul pattern for d = {d}")));
    }
    let matrices = differentials(res)?;
    let partition = match partition {
        Some(p) => {
            if p.steps.len() != res.length() + 1 {
                return Err(Error::Precondition(format!(
                    "partition has {} steps, the resolution {}",
                    p.steps.len(),
                    res.length() + 1
                )));
            }
            for m in 0..=res.length() {
                match check_step(res, d, &matrices, &p.steps[..=m], m)? {
                    Ok(_) => {}
                    Err(StepFailure::NotAdmissible { row, degree }) => {
                        return Err(Error::NotAdmissible { step: m, row, degree })
                    }
                    Err(f) => return Err(Error::NoPartition(format!("supplied partition fails at step {m}: {f:?}"))),
                }
            }
            p.clone()
        }
        None => search_partition(res, d, DEFAULT_PARTITION_CAP)?,
    };

    let mut couplings = Vec::new();
    let mut witnesses = Vec::new();
    for m in 1..=res.length() {
        let check = check_step(res, d, &matrices, &partition.steps[..=m], m)?
            .map_err(|f| Error::internal(format!("accepted partition fails at step {m}: {f:?}")))?;
        couplings.push(check.split.expect("step ≥ 1").coupling);
        witnesses.push(check.witnesses.expect("step ≥ 1"));
    }

    let prime = build_part(res, &matrices, &partition, |p| &p.prime, Pattern::DeltaPrime { d })?;
    let double_prime = build_part(res, &matrices, &partition, |p| &p.double_prime, Pattern::DeltaDoublePrime { d })?;

    let mut transcript = Vec::new();
    let mut record = |claim: String, holds: bool| transcript.push(Check { claim, holds });
    let bound = window.degree_bound;

    for m in 0..=res.length() {
        let mut whole = res.module(m).degrees();
        let mut parts = prime.modules[m].degrees();
        parts.extend(double_prime.modules[m].degrees());
        whole.sort_unstable();
        parts.sort_unstable();
        record(format!("Q_{m} = Q'_{m} ⊕ Q''_{m}"), whole == parts);
    }
    for (name, part) in [("Q'", &prime), ("Q''", &double_prime)] {
        record(format!("{name} follows {}", part.pattern), part.verdict.matches());
        let composites = part
            .differentials
            .windows(2)
            .all(|w| w[1].compose(gb, &w[0]).is_zero());
        record(format!("{name}: consecutive differentials compose to zero"), composites);
        record(
            format!("{name}: no differential has a scalar entry"),
            part.differentials.iter().all(|f| !f.has_constant_entry()),
        );
        let defects = complex_defects(gb, part, bound)?;
        record(format!("{name}: exact at Q_m for 1 ≤ m < L, degrees ≤ {bound}"), defects.is_empty());
    }
    for (m, (u, cert)) in couplings.iter().zip(&witnesses).enumerate() {
        let ok = cert.rows.iter().zip(u.entries()).all(|(c, row)| match c {
            RowCertificate::Witness { coefficients } => {
                let f_prime = matrices[m].submatrix(&partition.steps[m + 1].prime, &partition.steps[m].prime);
                &coefficients.apply(gb, f_prime.entries()) == row
            }
            RowCertificate::Counterexample { .. } => false,
        });
        record(format!("Im λ_{} ⊆ Im f'_{}", m + 1, m + 1), ok);
    }

    let m_dims = present_degreewise(gb, &res_presentation(res), bound).map(|q| q.dims()).ok();
    let sub_dims = image_dims(res, &partition.steps[0].prime)?;
    let m1_dims = present_degreewise(gb, &prime.presentation, bound)?.dims();
    let m2_dims = present_degreewise(gb, &double_prime.presentation, bound)?.dims();
    record("M' ≅ ε(Q'_0) degreewise".into(), m1_dims == sub_dims);
    let total: Vec<usize> = (0..=bound).map(|t| res.module_dim(t)).collect();
    if let Some(md) = m_dims {
        record("dim M from the presentation agrees with the resolution".into(), md == total);
    }
    record(
        "dim M_j = dim M'_j + dim M''_j".into(),
        (0..=bound).all(|t| total[t] == m1_dims[t] + m2_dims[t]),
    );

    for (name, part) in [("M'", &prime), ("M''", &double_prime)] {
        let again = homology::minimal_resolution(gb, &part.presentation, window.length, bound)?;
        let cert = certify(&again)?;
        record(format!("{name} re-resolved: certificate holds"), cert.holds());
        record(
            format!("{name} re-resolved: same generator degrees"),
            BettiTable::from_resolution(&again) == part.betti(window),
        );
    }
    let sum: Vec<BettiRecord> = {
        let mut t = prime.betti(window);
        for r in double_prime.betti(window).records() {
            t.set(r.i, r.j, t.get(r.i, r.j) + r.beta);
        }
        t.records()
    };
    record(
        "β(M) = β(M') + β(M'')".into(),
        sum == BettiTable::from_resolution(res).records(),
    );

    Ok(DecompositionResult {
        d,
        partition,
        prime,
        double_prime,
        couplings,
        witnesses,
        transcript,
        window,
    })
}

/// The presentation `F/T` a resolution was started from (connected case).
fn res_presentation(res: &Resolution) -> ModulePresentation {
    let f = res.ambient();
    let rows: Vec<Vec<Polynomial>> = res
        .relations()
        .iter()
        .map(|h| {
            (0..f.rank())
                .map(|g| h.element.entry(g).cloned().unwrap_or_else(Polynomial::zero))
                .collect()
        })
        .collect();
    ModulePresentation::new(res.gb().algebra(), f.generators.clone(), rows).expect("rows of a resolved module")
}
