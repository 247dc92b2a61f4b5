use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use kleisli_core::equivalence::{
    bisimilarity, disjoint_sum, quotient, star_ena, union_quotient, weak_bisimilarity_free, weak_bisimilarity_star,
    weak_bisimilarity_star_ena, Partition,
};
use kleisli_core::harness::{run_suite_named, GenConfig};
use kleisli_core::io::{
    dot_matrix, dot_partition, dot_system, matrix_summary, partition_value, read_aut, read_json, write_aut, write_json,
    write_value, Model,
};
use kleisli_core::kernel::{embed_underline, Effect, EnaSurface, MonadKind, Morphism, System};
use kleisli_core::saturation::{saturate_free, star};
use kleisli_core::trace::trace_exact;
use kleisli_core::Error;

use crate::{InFormat, InputOpts, Kind, OutFormat, OutputOpts, ReportFormat, Strategy};

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::Schema { .. } | Error::HeaderMismatch { .. } => 2,
            Error::UnknownState(_) => 4,
            Error::UnknownSuite(_) => 5,
            _ => 3,
        };
        CliError { code, message: e.to_string() }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn capability(message: impl Into<String>) -> CliError {
    CliError { code: 3, message: message.into() }
}

fn load(path: &Path, opts: InputOpts) -> Result<Model> {
    let bytes = fs::read(path).map_err(|e| CliError { code: 2, message: format!("{}: {e}", path.display()) })?;
    let format = opts.input_format.unwrap_or(match path.extension().and_then(|e| e.to_str()) {
        Some("aut") => InFormat::Aut,
        _ => InFormat::Json,
    });
    let model = match format {
        InFormat::Json => read_json(&bytes),
        InFormat::Aut => read_aut(&bytes),
    };
    model.map_err(|e| {
        let mut err = CliError::from(e);
        err.message = format!("{}: {}", path.display(), err.message);
        err
    })
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError { code: 2, message: format!("{}: {e}", path.display()) }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn out_format(out: &OutputOpts) -> OutFormat {
    out.format.unwrap_or(match out.output.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("aut") => OutFormat::Aut,
        Some("dot") | Some("gv") => OutFormat::Dot,
        _ => OutFormat::Json,
    })
}

fn write_system(system: &System, initial: Option<usize>, out: &OutputOpts) -> Result<()> {
    let text = match out_format(out) {
        OutFormat::Json => write_json(system, initial),
        OutFormat::Aut => write_aut(system, initial)?,
        OutFormat::Dot => dot_system(system),
    };
    emit(&text, out.output.as_deref())
}

fn surface(system: &System) -> Option<EnaSurface> {
    (system.kind() == MonadKind::Ena).then(|| EnaSurface::from_embedded(system).ok()).flatten()
}

pub fn convert(input: &Path, opts: InputOpts, out: &OutputOpts) -> Result<ExitCode> {
    let model = load(input, opts)?;
    write_system(&model.system, model.initial, out)?;
    Ok(ExitCode::SUCCESS)
}

pub fn saturate(input: &Path, strategy: Strategy, opts: InputOpts, out: &OutputOpts) -> Result<ExitCode> {
    let model = load(input, opts)?;
    let system = &model.system;
    match strategy {
        Strategy::Star => {
            let sat = match system.kind() {
                MonadKind::Lts | MonadKind::Pow => star(system)?,
                MonadKind::Ena => match surface(system) {
                    Some(ena) => star_ena(&ena)?.embed(),
                    None => return Err(capability("star saturation needs an ε-NA whose words have length at most one")),
                },
                MonadKind::FreeLts => return Err(capability("star saturation is not available for free-lts systems; use --strategy free")),
            };
            write_system(&sat, model.initial, out)?;
        }
        Strategy::Free => {
            let matrix = match system.kind() {
                MonadKind::Lts => saturate_free(&embed_underline(system)?)?,
                _ => saturate_free(system)?,
            };
            let text = match out_format(out) {
                OutFormat::Json => write_value(&matrix_summary(&matrix, 4, 5)),
                OutFormat::Dot => dot_matrix(&matrix, 4, 5),
                OutFormat::Aut => return Err(capability("the free saturation has no .aut form")),
            };
            emit(&text, out.output.as_deref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Loads one or two systems; two are placed side by side over a shared alphabet.
fn load_pair(first: &Path, second: Option<&Path>, opts: InputOpts) -> Result<(System, Vec<Model>)> {
    let a = load(first, opts)?;
    let Some(second) = second else {
        return Ok((a.system.clone(), vec![a]));
    };
    let b = load(second, opts)?;
    let alphabet = Arc::new(a.system.alphabet().union(b.system.alphabet()));
    let a = Model { system: a.system.relabel(alphabet.clone())?, initial: a.initial };
    let b = Model { system: b.system.relabel(alphabet)?, initial: b.initial };
    Ok((disjoint_sum(&a.system, &b.system)?, vec![a, b]))
}

fn partition_for(system: &System, kind: Kind, via: Strategy) -> Result<Partition> {
    Ok(match (kind, via, system.kind()) {
        (Kind::Strong, _, _) => bisimilarity(system)?,
        (Kind::Weak, Strategy::Star, MonadKind::Lts) => weak_bisimilarity_star(system)?,
        (Kind::Weak, Strategy::Star, MonadKind::Ena) => match surface(system) {
            Some(ena) => weak_bisimilarity_star_ena(&ena)?,
            None => return Err(capability("weak bisimilarity via star needs an ε-NA with words of length at most one; use --via free")),
        },
        (Kind::Weak, Strategy::Free, MonadKind::Lts) => weak_bisimilarity_free(&embed_underline(system)?)?,
        (Kind::Weak, Strategy::Free, MonadKind::FreeLts | MonadKind::Ena) => weak_bisimilarity_free(system)?,
        (Kind::Weak, _, k) => return Err(capability(format!("weak bisimilarity is not available for {k} systems with this strategy"))),
    })
}

pub fn bisim(
    first: &Path,
    second: Option<&Path>,
    kind: Kind,
    via: Strategy,
    pairs: &[String],
    format: ReportFormat,
    opts: InputOpts,
) -> Result<ExitCode> {
    let (system, models) = load_pair(first, second, opts)?;
    // Resolve the queried names before any work.
    let offset = models[0].system.len();
    let mut queries = Vec::with_capacity(pairs.len());
    for p in pairs {
        let (x, y) = p
            .split_once(',')
            .ok_or_else(|| CliError { code: 2, message: format!("--pair expects X,Y, got {p:?}") })?;
        let (x, y) = (x.trim(), y.trim());
        let i = models[0].system.source().lookup(x)?;
        let j = match models.get(1) {
            Some(b) => offset + b.system.source().lookup(y)?,
            None => models[0].system.source().lookup(y)?,
        };
        queries.push((x.to_string(), y.to_string(), i, j));
    }
    let partition = partition_for(&system, kind, via)?;
    if !queries.is_empty() {
        let mut all = true;
        let mut text = String::new();
        for (x, y, i, j) in &queries {
            let related = partition.related(*i, *j);
            all &= related;
            text.push_str(&format!("{x} ~ {y}: {}\n", if related { "yes" } else { "no" }));
        }
        emit(&text, None)?;
        return Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) });
    }
    let text = match format {
        ReportFormat::Text => {
            let space = partition.space();
            partition
                .blocks()
                .iter()
                .enumerate()
                .map(|(b, block)| {
                    let names: Vec<&str> = block.iter().map(|&x| space.name(x)).collect();
                    format!("block {b}: {}\n", names.join(" "))
                })
                .collect()
        }
        ReportFormat::Json => write_value(&partition_value(&partition)),
        ReportFormat::Dot => dot_partition(&partition, Some(&system)),
    };
    emit(&text, None)?;
    Ok(ExitCode::SUCCESS)
}

/// The input read as an ε-NA; LTS and free-LTS inputs have no accepting states.
fn as_ena(system: &System) -> Result<System> {
    let image: Vec<Effect> = match system.kind() {
        MonadKind::Ena => return Ok(system.clone()),
        MonadKind::Lts => embed_underline(system)?.image().iter().map(|e| Effect::ena(e.word_pairs().to_vec(), Vec::new())).collect(),
        MonadKind::FreeLts => system.image().iter().map(|e| Effect::ena(e.word_pairs().to_vec(), Vec::new())).collect(),
        MonadKind::Pow => return Err(capability("traces need labelled transitions; pow systems have none")),
    };
    Ok(Morphism::system(MonadKind::Ena, system.alphabet().clone(), system.source().clone(), image)?)
}

pub fn trace(input: &Path, state: &str, max_len: Option<usize>, opts: InputOpts) -> Result<ExitCode> {
    let model = load(input, opts)?;
    let x = model.system.source().lookup(state)?;
    let system = as_ena(&model.system)?;
    let lang = trace_exact(&system)?.lang(x);
    let alphabet = system.alphabet();
    let text = match max_len {
        Some(l) => lang.enumerate_upto(l).iter().map(|w| format!("{}\n", alphabet.render(w))).collect(),
        None if lang.is_empty() => "language: empty\n".to_string(),
        None => lang.minimal_dfa().describe(alphabet),
    };
    emit(&text, None)?;
    Ok(ExitCode::SUCCESS)
}

fn split_target(arg: &str) -> Result<(&Path, &str)> {
    let (file, state) =
        arg.rsplit_once(':').ok_or_else(|| CliError { code: 2, message: format!("expected FILE:STATE, got {arg:?}") })?;
    Ok((Path::new(file), state))
}

pub fn trace_equiv(first: &str, second: &str, opts: InputOpts) -> Result<ExitCode> {
    let (fa, sa) = split_target(first)?;
    let (fb, sb) = split_target(second)?;
    let (a, b) = (load(fa, opts)?, load(fb, opts)?);
    let (x, y) = (a.system.source().lookup(sa)?, b.system.source().lookup(sb)?);
    let alphabet = Arc::new(a.system.alphabet().union(b.system.alphabet()));
    let la = trace_exact(&as_ena(&a.system.relabel(alphabet.clone())?)?)?.lang(x);
    let lb = trace_exact(&as_ena(&b.system.relabel(alphabet)?)?)?.lang(y);
    let same = la.equivalent(&lb)?;
    emit(&format!("{first} ~ {second}: {}\n", if same { "yes" } else { "no" }), None)?;
    Ok(if same { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

pub fn minimize(input: &Path, kind: Kind, opts: InputOpts, out: &OutputOpts) -> Result<ExitCode> {
    let model = load(input, opts)?;
    let system = &model.system;
    let (partition, reduced) = match kind {
        Kind::Strong => {
            let p = bisimilarity(system)?;
            let q = quotient(system, &p)?;
            (p, q)
        }
        Kind::Weak => {
            let p = partition_for(system, Kind::Weak, Strategy::Star)?;
            let q = union_quotient(system, &p)?;
            (p, q)
        }
    };
    let initial = model.initial.map(|x| partition.block_of(x));
    write_system(&reduced, initial, out)?;
    Ok(ExitCode::SUCCESS)
}

pub fn check(suite: &str, cfg: &GenConfig, json: bool) -> Result<ExitCode> {
    let report = run_suite_named(suite, cfg)?;
    let text = if json { write_value(&report.to_value()) } else { report.to_text() };
    emit(&text, None)?;
    eprintln!("wall time: {:.3?}", report.wall_time);
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
