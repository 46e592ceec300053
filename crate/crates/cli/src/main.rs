use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use minkcount::formulas::{
    exact_count_even_d, lemma6_sum, verify_theorem1_all, vertex_bounds, FormulaError,
    RelationReport, VertexBounds,
};
use minkcount::gaussmap3d::{
    check_hemisphere, check_local_global, choose_poles, count_witnesses, gaussian_map, overlay,
    witness_membership, GaussError, GaussianMap3,
};
use minkcount::generators::{generate, make_general, Family, GenError, GenSpec};
use minkcount::io::{parse_poly, write_poly, PolyError};
use minkcount::minkowski::{
    is_general_orientation, minkowski_sum, partial_sum, MinkowskiError, Orientation, SumInstance,
};
use minkcount::polytope::combinations;
use minkcount::PolytopeError;

const SCHEMA_VERSION: u32 = 1;
const MANIFEST: &str = "manifest.json";

#[derive(Parser)]
#[command(
    name = "minkcount",
    version,
    about = "Exact face counts of Minkowski sums"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance and write one POLY file per summand.
    Gen {
        #[command(flatten)]
        spec: SpecArgs,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Check the face-count relation, the corollary bound and the vertex bounds.
    Verify {
        /// POLY files, or a directory written by `gen`.
        files: Vec<PathBuf>,
        #[command(flatten)]
        spec: SpecArgs,
        /// Values of k to check; defaults to every k < d the input allows.
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
        /// Rotate the summands into general orientations first.
        #[arg(long)]
        make_general: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the alternating binomial sum for all s < d <= r <= rmax.
    Identity {
        #[arg(long)]
        dmax: usize,
        #[arg(long)]
        rmax: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
    },
    /// Witness counts of Gaussian-map overlays in dimension 3.
    Gauss3 {
        files: Vec<PathBuf>,
        /// Seed for the pole axis search.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the full overlay as a JSON cell complex.
        #[arg(long)]
        dump_overlay: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Upper bounds on the vertex count of a sum.
    Bounds {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: usize,
        /// Vertex counts, one per summand or a single shared value.
        #[arg(long, value_delimiter = ',')]
        n: Vec<u64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Text,
    Json,
}

#[derive(clap::Args)]
struct SpecArgs {
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    /// Vertex counts, one per summand or a single shared value.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long, default_value = "random")]
    family: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SpecArgs {
    fn to_spec(&self) -> Result<GenSpec, Failure> {
        let (Some(d), Some(r)) = (self.d, self.r) else {
            return Err(Failure::usage("--d and --r are required"));
        };
        let family: Family = self.family.parse()?;
        let n = if self.n.is_empty() {
            vec![d + 1]
        } else {
            self.n.clone()
        };
        Ok(GenSpec {
            d,
            r,
            n,
            family,
            seed: self.seed,
        })
    }

    fn is_given(&self) -> bool {
        self.d.is_some() || self.r.is_some() || !self.n.is_empty()
    }
}

/// A failed run: exit code and message.
#[derive(Debug)]
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: 2,
            msg: msg.into(),
        }
    }
    fn degenerate(msg: impl Into<String>) -> Self {
        Failure {
            code: 3,
            msg: msg.into(),
        }
    }
    fn claim(msg: impl Into<String>) -> Self {
        Failure {
            code: 4,
            msg: msg.into(),
        }
    }
}

impl From<PolytopeError> for Failure {
    fn from(e: PolytopeError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<MinkowskiError> for Failure {
    fn from(e: MinkowskiError) -> Self {
        match e {
            MinkowskiError::DegenerateCoincidence { .. } => Failure::degenerate(e.to_string()),
            MinkowskiError::ClaimViolated(_) => Failure::claim(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<FormulaError> for Failure {
    fn from(e: FormulaError) -> Self {
        match e {
            FormulaError::GeneralOrientationRequired(_) => Failure::degenerate(e.to_string()),
            FormulaError::ClaimViolated(_) => Failure::claim(e.to_string()),
            FormulaError::Minkowski(m) => m.into(),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<GenError> for Failure {
    fn from(e: GenError) -> Self {
        match e {
            GenError::Invalid(_) => Failure::usage(e.to_string()),
            GenError::Minkowski(m) => m.into(),
            GenError::Polytope(p) => p.into(),
            _ => Failure::degenerate(e.to_string()),
        }
    }
}

impl From<GaussError> for Failure {
    fn from(e: GaussError) -> Self {
        match e {
            GaussError::NotThreeDimensional(_) | GaussError::NotFullDimensional => {
                Failure::usage(e.to_string())
            }
            GaussError::ClaimViolated(_) => Failure::claim(e.to_string()),
            _ => Failure::degenerate(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::usage(format!("{}: {e}", path.display()))
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    schema_version: u32,
    spec: GenSpec,
    files: Vec<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum InstanceDescriptor {
    Spec(GenSpec),
    Files(Vec<String>),
}

#[derive(Serialize)]
struct BoundsBlock {
    vertex_counts: Vec<u64>,
    f0: u64,
    #[serde(flatten)]
    bounds: VertexBounds,
    exact_count_even_d: Option<i128>,
    holds: bool,
}

#[derive(Serialize)]
struct MapWitness {
    subset: Vec<usize>,
    w: [u64; 3],
    f_vector: Vec<u64>,
}

#[derive(Serialize)]
struct WitnessBlock {
    poles: Vec<String>,
    maps: Vec<MapWitness>,
    identity: Vec<IdentityRow>,
    membership_checks: u64,
    memberships: u64,
}

#[derive(Serialize)]
struct IdentityRow {
    k: usize,
    full: i64,
    pair_sum: i64,
    single_sum: i64,
    holds: bool,
}

#[derive(Serialize)]
struct Timing {
    total_ms: u64,
}

#[derive(Serialize)]
struct RunReport {
    schema_version: u32,
    instance: InstanceDescriptor,
    made_general: bool,
    relations: Vec<RelationReport>,
    bounds: BoundsBlock,
    witness: Option<WitnessBlock>,
    timing: Timing,
    seed: u64,
}

#[derive(Serialize)]
struct Gauss3Report {
    schema_version: u32,
    files: Vec<String>,
    seed: u64,
    witness: WitnessBlock,
    timing: Timing,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(f) = configure_threads() {
        eprintln!("error: {}", f.msg);
        return ExitCode::from(f.code);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("MINKCOUNT_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Failure::usage(format!("MINKCOUNT_THREADS must be a number, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::usage(e.to_string()))
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Gen { spec, out } => cmd_gen(&spec.to_spec()?, &out),
        Command::Verify {
            files,
            spec,
            k,
            make_general,
            out,
        } => cmd_verify(&files, &spec, &k, make_general, out.as_deref()),
        Command::Identity { dmax, rmax, format } => cmd_identity(dmax, rmax, format),
        Command::Gauss3 {
            files,
            seed,
            dump_overlay,
            out,
        } => cmd_gauss3(&files, seed, dump_overlay.as_deref(), out.as_deref()),
        Command::Bounds { d, r, n, format } => cmd_bounds(d, r, &n, format),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_err(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn cmd_gen(spec: &GenSpec, out: &Path) -> Result<(), Failure> {
    let inst = generate(spec)?;
    fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
    let mut files = Vec::new();
    for (i, p) in inst.summands().iter().enumerate() {
        let name = format!("summand_{}.poly", i + 1);
        let path = out.join(&name);
        fs::write(&path, write_poly(p)).map_err(|e| io_err(&path, e))?;
        files.push(name);
    }
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        spec: spec.clone(),
        files,
    };
    let path = out.join(MANIFEST);
    fs::write(&path, to_json(&manifest)).map_err(|e| io_err(&path, e))?;
    println!("wrote {} summands to {}", inst.r(), out.display());
    Ok(())
}

/// Expands directories into the files listed in their manifest.
fn expand_files(files: &[PathBuf]) -> Result<Vec<PathBuf>, Failure> {
    let mut all = Vec::new();
    for f in files {
        if f.is_dir() {
            let path = f.join(MANIFEST);
            let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
            let m: Manifest = serde_json::from_str(&text)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            all.extend(m.files.iter().map(|name| f.join(name)));
        } else {
            all.push(f.clone());
        }
    }
    Ok(all)
}

fn load_files(files: &[PathBuf]) -> Result<(SumInstance, Vec<String>), Failure> {
    let paths = expand_files(files)?;
    if paths.is_empty() {
        return Err(Failure::usage("no input files"));
    }
    let mut summands = Vec::new();
    for path in &paths {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        let p =
            parse_poly(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        summands.push(p);
    }
    let names = paths.iter().map(|p| p.display().to_string()).collect();
    Ok((SumInstance::new(summands)?, names))
}

fn cmd_verify(
    files: &[PathBuf],
    spec_args: &SpecArgs,
    ks: &[usize],
    make: bool,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let start = Instant::now();
    let (inst, instance) = if files.is_empty() {
        let spec = spec_args.to_spec()?;
        (generate(&spec)?, InstanceDescriptor::Spec(spec))
    } else {
        if spec_args.is_given() {
            return Err(Failure::usage("give either files or --d/--r/--n, not both"));
        }
        let (inst, names) = load_files(files)?;
        (inst, InstanceDescriptor::Files(names))
    };
    let seed = spec_args.seed;
    let inst = if make {
        make_general(&inst, seed)?
    } else {
        inst
    };
    if let Orientation::Degenerate(face) = is_general_orientation(&inst)? {
        return Err(FormulaError::GeneralOrientationRequired(Box::new(face)).into());
    }
    let d = inst.dim();
    if inst.r() < d {
        return Err(Failure::usage(format!(
            "need r >= d, got r={}, d={d}",
            inst.r()
        )));
    }
    let ks: Vec<usize> = if !ks.is_empty() {
        ks.to_vec()
    } else if inst.all_full_dimensional() {
        (0..d).collect()
    } else {
        vec![0]
    };
    let relations = verify_theorem1_all(&inst, &ks)?;

    let f0 = match relations.iter().find(|r| r.k == 0) {
        Some(r) => r.lhs as u64,
        None => minkowski_sum(&inst)?.polytope.vertex_count() as u64,
    };
    let counts = inst.vertex_counts();
    let bounds = vertex_bounds(d, &counts)?;
    let uniform = counts.iter().all(|&n| n == counts[0]);
    let exact = if d % 2 == 0 && uniform {
        Some(exact_count_even_d(d, inst.r(), counts[0])?)
    } else {
        None
    };
    let holds = f0 as u128 <= bounds.product_bound
        && bounds.product_bound <= bounds.choose_total
        && bounds.product_bound <= bounds.choose_each;
    let bounds = BoundsBlock {
        vertex_counts: counts,
        f0,
        bounds,
        exact_count_even_d: exact,
        holds,
    };

    let witness = if d == 3 && inst.all_full_dimensional() {
        Some(witness_block(&inst, seed, false)?)
    } else {
        None
    };

    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        instance,
        made_general: make,
        relations,
        bounds,
        witness,
        timing: Timing {
            total_ms: start.elapsed().as_millis() as u64,
        },
        seed,
    };
    emit(&to_json(&report), out)?;

    let mut failures = Vec::new();
    for rel in &report.relations {
        if !rel.equal {
            failures.push(format!("k={}: lhs {} != rhs {}", rel.k, rel.lhs, rel.rhs));
        }
        if !rel.corollary_holds {
            failures.push(format!(
                "k={}: {} exceeds bound {}",
                rel.k, rel.lhs, rel.corollary_bound
            ));
        }
    }
    if !report.bounds.holds {
        failures.push("vertex bounds fail".into());
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::claim(failures.join("; ")))
    }
}

/// Witness counts for every single map, every pair overlay and the full
/// overlay, the counting identity across them, and optionally the
/// membership check of every full-overlay witness against every subset.
fn witness_block(inst: &SumInstance, seed: u64, membership: bool) -> Result<WitnessBlock, Failure> {
    Ok(witness_block_with_overlay(inst, seed, membership)?.0)
}

fn witness_block_with_overlay(
    inst: &SumInstance,
    seed: u64,
    membership: bool,
) -> Result<(WitnessBlock, GaussianMap3), Failure> {
    let r = inst.r();
    let singles: Vec<GaussianMap3> = inst
        .summands()
        .iter()
        .map(gaussian_map)
        .collect::<Result<_, _>>()?;
    let overlay_of = |s: &[usize]| -> Result<GaussianMap3, GaussError> {
        let maps: Vec<&GaussianMap3> = s.iter().map(|&i| &singles[i]).collect();
        overlay(&maps)
    };
    let everything: Vec<usize> = (0..r).collect();
    let full = overlay_of(&everything)?;
    let poles = choose_poles(&full, seed)?;

    let mut subsets: Vec<Vec<usize>> = (1..=2.min(r)).flat_map(|k| combinations(r, k)).collect();
    if r > 2 {
        subsets.push(everything.clone());
    }
    let mut maps = Vec::new();
    let mut w_of = std::collections::BTreeMap::new();
    for s in &subsets {
        let m = if s.len() == r {
            full.clone()
        } else {
            overlay_of(s)?
        };
        let f = partial_sum(inst, s)?.polytope.f_vector();
        let w = count_witnesses(&m, &poles)?.w;
        let want = [f.0[2], f.0[1], f.0[0] - 2];
        if w != want {
            return Err(Failure::claim(format!(
                "subset {s:?}: witness counts {w:?} differ from (f_2, f_1, f_0 - 2) = {want:?}"
            )));
        }
        check_local_global(&m, &poles)?;
        check_hemisphere(&m, &poles)?;
        w_of.insert(s.clone(), w);
        maps.push(MapWitness {
            subset: s.iter().map(|i| i + 1).collect(),
            w,
            f_vector: f.0,
        });
    }

    let identity: Vec<IdentityRow> = (0..3)
        .map(|k| {
            let pair_sum: i64 = combinations(r, 2).iter().map(|s| w_of[s][k] as i64).sum();
            let single_sum: i64 = (0..r).map(|i| w_of[&vec![i]][k] as i64).sum();
            let full_w = w_of[&everything][k] as i64;
            IdentityRow {
                k,
                full: full_w,
                pair_sum,
                single_sum,
                holds: full_w == pair_sum - (r as i64 - 2) * single_sum,
            }
        })
        .collect();
    if let Some(bad) = identity.iter().find(|row| !row.holds) {
        return Err(Failure::claim(format!(
            "counting identity fails for k={}: {} != {} - {}*{}",
            bad.k,
            bad.full,
            bad.pair_sum,
            r - 2,
            bad.single_sum
        )));
    }

    let (mut checks, mut members) = (0, 0);
    if membership {
        let witnesses = count_witnesses(&full, &poles)?;
        for size in 1..=r {
            for s in combinations(r, size) {
                let sub = if size == r {
                    full.clone()
                } else {
                    overlay_of(&s)?
                };
                for (cell, _) in &witnesses.per_cell {
                    checks += 1;
                    if witness_membership(&full, *cell, &sub, &s, &poles)? {
                        members += 1;
                    }
                }
            }
        }
    }

    let block = WitnessBlock {
        poles: poles.axis.iter().map(|x| x.to_string()).collect(),
        maps,
        identity,
        membership_checks: checks,
        memberships: members,
    };
    Ok((block, full))
}

fn cmd_gauss3(
    files: &[PathBuf],
    seed: u64,
    dump: Option<&Path>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let start = Instant::now();
    let (inst, names) = load_files(files)?;
    if inst.dim() != 3 {
        return Err(Failure::usage(format!(
            "gauss3 needs d = 3, got d = {}",
            inst.dim()
        )));
    }
    if !inst.all_full_dimensional() {
        return Err(Failure::usage("gauss3 needs full-dimensional summands"));
    }
    let (witness, full) = witness_block_with_overlay(&inst, seed, true)?;
    if let Some(path) = dump {
        fs::write(path, to_json(&full.to_json())).map_err(|e| io_err(path, e))?;
    }
    let report = Gauss3Report {
        schema_version: SCHEMA_VERSION,
        files: names,
        seed,
        witness,
        timing: Timing {
            total_ms: start.elapsed().as_millis() as u64,
        },
    };
    emit(&to_json(&report), out)
}

fn cmd_identity(dmax: usize, rmax: usize, format: TableFormat) -> Result<(), Failure> {
    if dmax < 2 || dmax > rmax {
        return Err(Failure::usage(format!(
            "need 2 <= dmax <= rmax, got dmax={dmax}, rmax={rmax}"
        )));
    }
    let mut rows = Vec::new();
    for d in 2..=dmax {
        for r in d..=rmax {
            for s in 1..d {
                let v = lemma6_sum(s, d, r)?;
                rows.push((s, d, r, v));
            }
        }
    }
    let text = match format {
        TableFormat::Text => {
            let mut t = format!("{:>3} {:>3} {:>3} {:>6}\n", "s", "d", "r", "value");
            for (s, d, r, v) in &rows {
                t.push_str(&format!("{s:>3} {d:>3} {r:>3} {v:>6}\n"));
            }
            t
        }
        TableFormat::Json => to_json(&Value::Array(
            rows.iter()
                .map(|(s, d, r, v)| json!({"s": s, "d": d, "r": r, "value": v.to_string()}))
                .collect(),
        )),
    };
    print!("{text}");
    match rows.iter().find(|row| row.3 != 1) {
        None => Ok(()),
        Some((s, d, r, v)) => Err(Failure::claim(format!("s={s} d={d} r={r} gives {v}"))),
    }
}

fn cmd_bounds(d: usize, r: usize, n: &[u64], format: Format) -> Result<(), Failure> {
    if d < 2 || r < d {
        return Err(Failure::usage(format!(
            "need r >= d >= 2, got r={r}, d={d}"
        )));
    }
    let counts: Vec<u64> = match n.len() {
        0 => return Err(Failure::usage("--n is required")),
        1 => vec![n[0]; r],
        len if len == r => n.to_vec(),
        len => {
            return Err(Failure::usage(format!(
                "{len} vertex counts given for r={r}"
            )))
        }
    };
    let b = vertex_bounds(d, &counts)?;
    let uniform = counts.iter().all(|&x| x == counts[0]);
    let exact = if d % 2 == 0 && uniform {
        Some(exact_count_even_d(d, r, counts[0])?)
    } else {
        None
    };
    let text = match format {
        Format::Csv => {
            let ns: Vec<String> = counts.iter().map(u64::to_string).collect();
            format!(
                "d,r,n,product_bound,choose_total,choose_each,exact_count_even_d\n{d},{r},{},{},{},{},{}\n",
                ns.join(";"),
                b.product_bound,
                b.choose_total,
                b.choose_each,
                exact.map_or(String::new(), |e| e.to_string())
            )
        }
        Format::Json => to_json(&json!({
            "d": d,
            "r": r,
            "n": counts,
            "product_bound": b.product_bound.to_string(),
            "choose_total": b.choose_total.to_string(),
            "choose_each": b.choose_each.to_string(),
            "exact_count_even_d": exact.map(|e| e.to_string()),
        })),
    };
    print!("{text}");
    Ok(())
}
