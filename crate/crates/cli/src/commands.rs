use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use qudit_magic::covering::{cover_composite, expected_cover_size, verify_cover, CoverReport};
use qudit_magic::dense::{dimension, DenseOperator, DenseState, LogBase, StateFile};
use qudit_magic::magic::{build_dictionary_with_budget, certify_patches, magic_report, Measure, PatchBound, PatchCertificate, TargetSet};
use qudit_magic::stabilizer::{find_rephasing_pauli, parse_tableau, render_tableau};
use qudit_magic::toric::{annulus_extreme_points, build_toric, quantization_check, standard_annulus, AnyonType};
use qudit_magic::witness::{logn_lrm_assemble, mi_forbidden_window, mi_stability_check, DecayProfile};
use qudit_magic::{Error, VERSION};
use serde::{Deserialize, Serialize};

use crate::exit::CliError;
use crate::{Cli, Command, GlobalArgs, Target, ToricCommand, WitnessCommand};

#[derive(Serialize)]
struct Versions {
    qmagic: &'static str,
    qudit_magic: &'static str,
}

#[derive(Serialize)]
struct RunConfig {
    base: LogBase,
    dense_budget: usize,
    enumeration_budget: usize,
    seed: u64,
    versions: Versions,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    command: &'a str,
    config: RunConfig,
    result: T,
}

type Outcome = Result<u8, CliError>;

pub fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Cover { q, n, verify, tableau } => cover(g, *q, *n, *verify, tableau.as_deref()),
        Command::Magic { state, measures } => magic(g, state, measures),
        Command::Certify { patches, target, hull_iterations } => certify(g, patches, *target, *hull_iterations),
        Command::Toric(ToricCommand::Smatrix { q, lx, ly, pairs }) => smatrix(g, *q, *lx, *ly, pairs),
        Command::Toric(ToricCommand::Annulus { q, lx, ly }) => annulus(g, *q, *lx, *ly),
        Command::Witness(WitnessCommand::Mi { state, region_a, region_b, tol }) => {
            let psi = load_state(g, state)?;
            let verdict = mi_forbidden_window(&psi.density(), region_a, region_b, *tol, g.base)?;
            emit(g, "witness mi", &verdict)
        }
        Command::Witness(WitnessCommand::Stability { state, depth, region_a, region_b }) => {
            let psi = load_state(g, state)?;
            let report = mi_stability_check(&psi, *depth, region_a, region_b, g.seed, g.base)?;
            emit(g, "witness stability", &report)
        }
        Command::Witness(WitnessCommand::Assemble { profile, certs }) => assemble(g, profile, certs),
        Command::Rephase { tableau, targets } => rephase(g, tableau, targets),
    }
}

fn emit<T: Serialize>(g: &GlobalArgs, command: &str, result: &T) -> Outcome {
    let envelope = Envelope {
        schema: 1,
        command,
        config: RunConfig {
            base: g.base,
            dense_budget: g.dense_budget,
            enumeration_budget: g.enumeration_budget,
            seed: g.seed,
            versions: Versions { qmagic: env!("CARGO_PKG_VERSION"), qudit_magic: VERSION },
        },
        result,
    };
    let mut text = serde_json::to_string_pretty(&envelope).map_err(|e| CliError::internal(e.to_string()))?;
    text.push('\n');
    match &g.output {
        Some(path) => write_file(path, &text)?,
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::internal(format!("stdout: {e}")))?,
    }
    Ok(0)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::from_input(path, Error::Parse(e.to_string())))
}

fn state_from_file(g: &GlobalArgs, path: &Path, file: StateFile) -> Result<DenseState, CliError> {
    if file.q < 2 {
        return Err(CliError::from_input(path, Error::InvalidModulus(file.q)));
    }
    dimension(file.q, file.n, g.dense_budget).map_err(|e| CliError::from_input(path, e))?;
    file.into_state().map_err(|e| CliError::from_input(path, e))
}

fn load_state(g: &GlobalArgs, path: &Path) -> Result<DenseState, CliError> {
    let text = read_file(path)?;
    let file: StateFile = parse_json(path, &text)?;
    state_from_file(g, path, file)
}

#[derive(Serialize)]
struct CoverOutput {
    q: u64,
    n: usize,
    members: usize,
    expected_members: u128,
    tableau: PathBuf,
    verification: Option<CoverReport>,
}

fn cover(g: &GlobalArgs, q: u64, n: usize, verify: bool, tableau: Option<&Path>) -> Outcome {
    if n == 0 {
        return Err(CliError::usage("--n must be at least 1"));
    }
    let expected = expected_cover_size(q, n)?;
    if expected > g.enumeration_budget as u128 {
        return Err(Error::BudgetExceeded(format!("cover of {expected} members exceeds {}", g.enumeration_budget)).into());
    }
    let family = cover_composite(q, n)?;
    let mut text = String::new();
    for i in 0..family.members.len() {
        let group = family.member_group(i)?;
        text.push_str(&format!("# member {i}\n"));
        text.push_str(&render_tableau(q, n, group.generators()));
    }
    let path = tableau.map_or_else(|| PathBuf::from(format!("cover-q{q}-n{n}.tab")), Path::to_path_buf);
    write_file(&path, &text)?;
    let verification = if verify { Some(verify_cover(&family, g.enumeration_budget as u64)?) } else { None };
    let failed = verification.as_ref().is_some_and(|r| !r.passed);
    let out = CoverOutput { q, n, members: family.members.len(), expected_members: expected, tableau: path, verification };
    emit(g, "cover", &out)?;
    Ok(if failed { 1 } else { 0 })
}

#[derive(Serialize)]
struct MagicOutput {
    q: u64,
    n: usize,
    dictionary_size: usize,
    report: qudit_magic::magic::MagicReport,
}

fn magic(g: &GlobalArgs, path: &Path, names: &[String]) -> Outcome {
    let mut measures = Vec::new();
    for name in names {
        let m = Measure::parse(name).ok_or_else(|| CliError::usage(format!("unknown measure {name:?}; use lf, srel, smax, lgr or lr")))?;
        if !measures.contains(&m) {
            measures.push(m);
        }
    }
    let psi = load_state(g, path)?;
    let dict = build_dictionary_with_budget(psi.n, psi.q, g.enumeration_budget)?;
    let report = magic_report(&psi.density(), &dict, &measures, g.base)?;
    emit(g, "magic", &MagicOutput { q: psi.q, n: psi.n, dictionary_size: dict.len(), report })
}

fn certify(g: &GlobalArgs, path: &Path, target: Target, hull_iterations: usize) -> Outcome {
    let text = read_file(path)?;
    let files: Vec<StateFile> = parse_json(path, &text)?;
    if files.is_empty() {
        return Err(CliError::data(format!("{}: no patches", path.display())));
    }
    let patches: Vec<DenseOperator> = files
        .into_iter()
        .map(|f| state_from_file(g, path, f).map(|s| s.density()))
        .collect::<Result<_, _>>()?;
    let target = match target {
        Target::Sp => TargetSet::Sp,
        Target::S => TargetSet::S,
    };
    let cert = certify_patches(&patches, target, g.base, g.enumeration_budget, hull_iterations)?;
    emit(g, "certify", &cert)
}

fn parse_pair(q: u64, s: &str) -> Result<(AnyonType, AnyonType), CliError> {
    let bad = || CliError::usage(format!("pair {s:?} must look like `a,b:c,d`"));
    let (first, second) = s.split_once(':').ok_or_else(bad)?;
    let anyon = |t: &str| -> Result<AnyonType, CliError> {
        let (a, b) = t.split_once(',').ok_or_else(bad)?;
        let a = a.trim().parse::<u64>().map_err(|_| bad())?;
        let b = b.trim().parse::<u64>().map_err(|_| bad())?;
        Ok(AnyonType::new(q, a, b))
    };
    Ok((anyon(first)?, anyon(second)?))
}

fn smatrix(g: &GlobalArgs, q: u64, lx: usize, ly: usize, pairs: &[String]) -> Outcome {
    if q < 2 {
        return Err(Error::InvalidModulus(q).into());
    }
    let pairs: Vec<(AnyonType, AnyonType)> = pairs
        .iter()
        .flat_map(|s| s.split_whitespace())
        .map(|s| parse_pair(q, s))
        .collect::<Result<_, _>>()?;
    let code = build_toric(q, lx, ly)?;
    let report = quantization_check(&code, if pairs.is_empty() { None } else { Some(&pairs) })?;
    emit(g, "toric smatrix", &report)
}

fn annulus(g: &GlobalArgs, q: u64, lx: usize, ly: usize) -> Outcome {
    let code = build_toric(q, lx, ly)?;
    let geom = standard_annulus(&code.lattice)?;
    let report = annulus_extreme_points(&code, &geom.annulus, &geom.thickened, Some(&geom.probe))?;
    emit(g, "toric annulus", &report)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CertsFile {
    Certificate(PatchCertificate),
    Bounds(Vec<PatchBound>),
}

fn assemble(g: &GlobalArgs, profile_path: &Path, certs_path: &Path) -> Outcome {
    let profile: DecayProfile = parse_json(profile_path, &read_file(profile_path)?)?;
    profile.validate().map_err(|e| CliError::from_input(profile_path, e))?;
    let certs = match parse_json(certs_path, &read_file(certs_path)?)? {
        CertsFile::Certificate(c) => c.patches,
        CertsFile::Bounds(b) => b,
    };
    let bound = logn_lrm_assemble(&profile, &certs, g.base).map_err(|e| CliError::from_input(certs_path, e))?;
    emit(g, "witness assemble", &bound)
}

#[derive(Serialize)]
struct RephaseOutput {
    targets: Vec<u64>,
    label: String,
}

fn rephase(g: &GlobalArgs, path: &Path, targets: &[u64]) -> Outcome {
    let (_, _, gens) = parse_tableau(&read_file(path)?).map_err(|e| CliError::from_input(path, e))?;
    let p = find_rephasing_pauli(&gens, targets)?;
    emit(g, "rephase", &RephaseOutput { targets: targets.to_vec(), label: p.to_string() })
}
