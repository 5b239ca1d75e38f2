//! One function per subcommand, plus the input-loading and error
//! classification shared between them.

use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use pathsig::{
    embed_counting, embed_linear, gram, gram_symmetric, log_signature, mmd2_unbiased, parse_table,
    parse_ticks, sig_kernel, signature, solve_cde, AlgebraError, AlgebraShape, Delimiter, Kernel64,
    LogOdeConfig, LogOdeError, LyndonError, Matrix64, MissingPolicy, Path64, SignatureError,
    StreamError, TableFormat, VectorFieldSet,
};

use crate::report::{coefficient_map, emit, read_input, ReportBuilder};
use crate::{
    CliError, CommonArgs, DelimiterArg, DemoInsiderArgs, KernelArg, KernelArgs, LogodeArgs,
    MissingArg, MmdArgs, SigArgs,
};

const INSIDER_LABELS: [&str; 3] = ["call", "trade", "move"];

fn table_format(common: &CommonArgs) -> TableFormat {
    TableFormat {
        delimiter: match common.delimiter {
            DelimiterArg::Comma => Delimiter::Comma,
            DelimiterArg::Tab => Delimiter::Tab,
        },
        has_header: common.header,
    }
}

fn stream_error(e: StreamError) -> CliError {
    CliError::usage(e)
}

fn algebra_error(e: AlgebraError) -> CliError {
    match e {
        AlgebraError::DimOverflow { .. } | AlgebraError::EmptyAlphabet => CliError::usage(e),
        other => CliError::numeric(other),
    }
}

fn lyndon_error(e: LyndonError) -> CliError {
    match e {
        LyndonError::Algebra(a) => algebra_error(a),
        other => CliError::numeric(other),
    }
}

fn signature_error(e: SignatureError) -> CliError {
    match e {
        SignatureError::Algebra(a) => algebra_error(a),
        SignatureError::Lyndon(l) => lyndon_error(l),
        SignatureError::NonAdjacent { .. } => CliError::numeric(e),
    }
}

fn kernel_error(e: pathsig::KernelError) -> CliError {
    use pathsig::KernelError::*;
    match e {
        PsdViolated { .. } | NonFinite => CliError::numeric(e),
        other => CliError::usage(other),
    }
}

fn logode_error(e: LogOdeError) -> CliError {
    match e {
        LogOdeError::NonFiniteState { .. } => CliError::numeric(e),
        LogOdeError::Signature(s) => signature_error(s),
        LogOdeError::Algebra(a) => algebra_error(a),
        LogOdeError::Stream(s) => stream_error(s),
        other => CliError::usage(other),
    }
}

fn embed_policy(missing: MissingArg) -> MissingPolicy {
    match missing {
        MissingArg::Ffill => MissingPolicy::ForwardFill,
    }
}

fn load_path(
    file: &Path,
    format: TableFormat,
    missing: MissingArg,
    time_augment: bool,
    builder: &mut ReportBuilder,
) -> Result<Path64, CliError> {
    let bytes = read_input(file)?;
    builder.record_input(file, &bytes);
    let stream = parse_table::<f64>(&bytes, format)
        .map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
    embed_linear(&stream, embed_policy(missing), time_augment)
        .map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))
}

/// A file is one path; a directory is its files in name order.
fn load_collection(
    root: &Path,
    format: TableFormat,
    missing: MissingArg,
    time_augment: bool,
    builder: &mut ReportBuilder,
) -> Result<Vec<Path64>, CliError> {
    if !root.is_dir() {
        return Ok(vec![load_path(
            root,
            format,
            missing,
            time_augment,
            builder,
        )?]);
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(root)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", root.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::Usage(format!(
            "directory {} contains no path files",
            root.display()
        )));
    }
    files
        .iter()
        .map(|f| load_path(f, format, missing, time_augment, builder))
        .collect()
}

fn static_kernel(kind: KernelArg, sigma: f64) -> Result<(Kernel64, &'static str), CliError> {
    match kind {
        KernelArg::Linear => Ok((Kernel64::linear(), "linear")),
        KernelArg::Rbf => Ok((Kernel64::rbf(sigma).map_err(CliError::usage)?, "rbf")),
    }
}

fn span_json(span: (f64, f64)) -> Value {
    json!([span.0, span.1])
}

pub fn run_sig(args: &SigArgs, logsig: bool) -> Result<(), CliError> {
    let command: &'static str = if logsig { "logsig" } else { "sig" };
    let config = json!({
        "input": args.input.display().to_string(),
        "depth": args.depth,
        "time_augment": args.time_augment,
        "missing": "ffill",
        "delimiter": if args.common.delimiter == DelimiterArg::Tab { "tab" } else { "comma" },
        "header": args.common.header,
        "format": "json",
        "verify": args.verify.as_ref().map(|p| p.display().to_string()),
    });
    let mut builder = ReportBuilder::new(command, config);
    let path = load_path(
        &args.input,
        table_format(&args.common),
        args.missing,
        args.time_augment,
        &mut builder,
    )?;

    let (payload_key, pairs, span) = if logsig {
        let coords = log_signature(&path, args.depth).map_err(signature_error)?;
        ("coordinates", coords.word_map(), path.span())
    } else {
        let sig = signature(&path, args.depth).map_err(signature_error)?;
        ("coefficients", sig.tensor().word_map(), sig.interval())
    };

    if let Some(previous) = &args.verify {
        verify_against(previous, payload_key, &pairs)?;
    }

    let mut payload = Map::new();
    payload.insert("interval".into(), span_json(span));
    payload.insert("dimension".into(), json!(path.dim()));
    payload.insert(payload_key.into(), coefficient_map(pairs));
    if args.verify.is_some() {
        payload.insert("verified".into(), json!(true));
    }
    let report = builder.finish(Value::Object(payload));
    emit(&report, args.common.output.as_deref())
}

/// Determinism check: the freshly computed mapping must reproduce a previous
/// report's mapping exactly.
fn verify_against(previous: &Path, key: &str, pairs: &[(String, f64)]) -> Result<(), CliError> {
    let bytes = read_input(previous)?;
    let report: Value = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Usage(format!("{}: not valid JSON: {e}", previous.display())))?;
    let recorded = report.get(key).and_then(Value::as_object).ok_or_else(|| {
        CliError::Usage(format!(
            "{}: no {key:?} object to verify against",
            previous.display()
        ))
    })?;
    if recorded.len() != pairs.len() {
        return Err(CliError::Numeric(format!(
            "verification failed: {} words recorded, {} recomputed",
            recorded.len(),
            pairs.len()
        )));
    }
    for (word, value) in pairs {
        let old = recorded.get(word).and_then(Value::as_f64);
        if old != Some(*value) {
            return Err(CliError::Numeric(format!(
                "verification failed at word {word:?}: recorded {old:?}, recomputed {value}"
            )));
        }
    }
    Ok(())
}

/// Parse the LINEAR vector-field block: declared v and d, d matrices in
/// row-major order, optionally an initial state z0.
fn parse_field_block(
    bytes: &[u8],
    origin: &Path,
) -> Result<(Vec<Matrix64>, Option<Vec<f64>>), CliError> {
    let fail = |msg: String| CliError::Usage(format!("{}: {msg}", origin.display()));
    let value: Value =
        serde_json::from_slice(bytes).map_err(|e| fail(format!("not valid JSON: {e}")))?;
    let object = value
        .as_object()
        .ok_or_else(|| fail("field block must be a JSON object".into()))?;
    let v = object
        .get("v")
        .and_then(Value::as_u64)
        .ok_or_else(|| fail("missing integer \"v\" (state dimension)".into()))?
        as usize;
    let d = object
        .get("d")
        .and_then(Value::as_u64)
        .ok_or_else(|| fail("missing integer \"d\" (channel count)".into()))? as usize;
    let matrices = object
        .get("matrices")
        .and_then(Value::as_array)
        .ok_or_else(|| fail("missing \"matrices\" array".into()))?;
    if matrices.len() != d {
        return Err(fail(format!(
            "expected {d} matrices, found {}",
            matrices.len()
        )));
    }
    let mut parsed = Vec::with_capacity(d);
    for (i, matrix) in matrices.iter().enumerate() {
        let entries: Option<Vec<f64>> = matrix
            .as_array()
            .and_then(|row| row.iter().map(Value::as_f64).collect::<Option<Vec<_>>>());
        let entries =
            entries.ok_or_else(|| fail(format!("matrix {i} must be a flat numeric array")))?;
        if entries.len() != v * v {
            return Err(fail(format!(
                "matrix {i} has {} entries, expected {v}x{v} = {} row-major values",
                entries.len(),
                v * v
            )));
        }
        parsed.push(Matrix64::from_row_major(v, entries).map_err(|e| fail(e.to_string()))?);
    }
    let z0 = match object.get("z0") {
        None => None,
        Some(z) => {
            let z: Option<Vec<f64>> = z
                .as_array()
                .and_then(|row| row.iter().map(Value::as_f64).collect::<Option<Vec<_>>>());
            let z = z.ok_or_else(|| fail("\"z0\" must be a numeric array".into()))?;
            if z.len() != v {
                return Err(fail(format!(
                    "\"z0\" has {} entries, expected {v}",
                    z.len()
                )));
            }
            Some(z)
        }
    };
    Ok((parsed, z0))
}

pub fn run_logode(args: &LogodeArgs) -> Result<(), CliError> {
    let config = json!({
        "input": args.input.display().to_string(),
        "field": args.field.display().to_string(),
        "depth": args.depth,
        "steps": args.steps,
        "substeps": args.substeps,
        "time_augment": args.time_augment,
        "missing": "ffill",
        "format": "json",
    });
    let mut builder = ReportBuilder::new("logode", config);
    let path = load_path(
        &args.input,
        table_format(&args.common),
        args.missing,
        args.time_augment,
        &mut builder,
    )?;
    let field_bytes = read_input(&args.field)?;
    builder.record_input(&args.field, &field_bytes);
    let (matrices, file_z0) = parse_field_block(&field_bytes, &args.field)?;
    let z0 = match &args.z0 {
        Some(text) => text
            .split(',')
            .map(|part| part.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Usage(format!("--z0: {e}")))?,
        None => file_z0.ok_or_else(|| {
            CliError::Usage("no initial state: pass --z0 or put \"z0\" in the field block".into())
        })?,
    };
    let vf = VectorFieldSet::linear(matrices).map_err(logode_error)?;
    if args.steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let (start, end) = path.span();
    if start == end {
        return Err(CliError::Usage(
            "the driving path covers a single instant; nothing to solve".into(),
        ));
    }
    let solver_config =
        LogOdeConfig::uniform(start, end, args.steps, args.depth).with_substeps(args.substeps);
    let trajectory = solve_cde(&vf, &path, &solver_config, &z0).map_err(logode_error)?;
    let payload = json!({
        "partition": solver_config.partition,
        "state_dimension": z0.len(),
        "z0": z0,
        "trajectory": trajectory,
    });
    let report = builder.finish(payload);
    emit(&report, args.common.output.as_deref())
}

pub fn run_kernel(args: &KernelArgs) -> Result<(), CliError> {
    let (kernel, kind) = static_kernel(args.kernel, args.sigma)?;
    let config = json!({
        "input": args.input.display().to_string(),
        "input_b": args.input_b.as_ref().map(|p| p.display().to_string()),
        "kernel": kind,
        "sigma": if args.kernel == KernelArg::Rbf { Some(args.sigma) } else { None },
        "refine": args.refine,
        "time_augment": args.time_augment,
        "missing": "ffill",
        "format": "json",
    });
    let mut builder = ReportBuilder::new("kernel", config);
    let format = table_format(&args.common);
    let a = load_collection(
        &args.input,
        format,
        args.missing,
        args.time_augment,
        &mut builder,
    )?;
    let grid_sizes = |paths: &[Path64]| -> Vec<usize> {
        paths
            .iter()
            .map(|p| p.num_segments() * (1usize << args.refine.min(30)) + 1)
            .collect()
    };

    let payload = match &args.input_b {
        None if a.len() == 1 => {
            let value = sig_kernel(&a[0], &a[0], kernel, args.refine).map_err(kernel_error)?;
            json!({ "value": value, "grid_sizes": { "a": grid_sizes(&a), "b": grid_sizes(&a) } })
        }
        None => {
            let result = gram_symmetric(&a, kernel, args.refine).map_err(kernel_error)?;
            json!({
                "gram": result.matrix,
                "min_eigenvalue": result.min_eigenvalue,
                "psd_flagged": result.flagged,
                "grid_sizes": { "a": grid_sizes(&a), "b": grid_sizes(&a) },
            })
        }
        Some(input_b) => {
            let b = load_collection(
                input_b,
                format,
                args.missing,
                args.time_augment,
                &mut builder,
            )?;
            if a.len() == 1 && b.len() == 1 && !args.input.is_dir() && !input_b.is_dir() {
                let value = sig_kernel(&a[0], &b[0], kernel, args.refine).map_err(kernel_error)?;
                json!({ "value": value, "grid_sizes": { "a": grid_sizes(&a), "b": grid_sizes(&b) } })
            } else {
                let matrix = gram(&a, &b, kernel, args.refine).map_err(kernel_error)?;
                json!({
                    "gram": matrix,
                    "grid_sizes": { "a": grid_sizes(&a), "b": grid_sizes(&b) },
                })
            }
        }
    };
    let report = builder.finish(payload);
    emit(&report, args.common.output.as_deref())
}

pub fn run_mmd(args: &MmdArgs) -> Result<(), CliError> {
    let (kernel, kind) = static_kernel(args.kernel, args.sigma)?;
    let config = json!({
        "input": args.input.display().to_string(),
        "input_b": args.input_b.display().to_string(),
        "kernel": kind,
        "sigma": if args.kernel == KernelArg::Rbf { Some(args.sigma) } else { None },
        "refine": args.refine,
        "time_augment": args.time_augment,
        "missing": "ffill",
        "format": "json",
    });
    let mut builder = ReportBuilder::new("mmd", config);
    let format = table_format(&args.common);
    let p = load_collection(
        &args.input,
        format,
        args.missing,
        args.time_augment,
        &mut builder,
    )?;
    let q = load_collection(
        &args.input_b,
        format,
        args.missing,
        args.time_augment,
        &mut builder,
    )?;
    let value = mmd2_unbiased(&p, &q, kernel, args.refine).map_err(kernel_error)?;
    let payload = json!({
        "mmd2": value,
        "samples": { "p": p.len(), "q": q.len() },
    });
    let report = builder.finish(payload);
    emit(&report, args.common.output.as_deref())
}

pub fn run_demo_insider(args: &DemoInsiderArgs) -> Result<(), CliError> {
    if args.depth < 3 {
        return Err(CliError::Usage(format!(
            "--depth {} is too shallow: the suspicion score is the coefficient of a length-3 word",
            args.depth
        )));
    }
    let config = json!({
        "input": args.input.display().to_string(),
        "depth": args.depth,
        "labels": INSIDER_LABELS,
        "format": "json",
    });
    let mut builder = ReportBuilder::new("demo-insider", config);
    let bytes = read_input(&args.input)?;
    builder.record_input(&args.input, &bytes);
    let ticks = parse_ticks::<f64>(&bytes, &INSIDER_LABELS, table_format(&args.common))
        .map_err(|e| CliError::Usage(format!("{}: {e}", args.input.display())))?;
    let path = embed_counting(&ticks);
    let sig = signature(&path, args.depth).map_err(signature_error)?;
    let score = sig.tensor().coeff(&[1, 2, 3]);
    let feature_dimension = AlgebraShape::new(3, 3).map_err(algebra_error)?.dim();

    let mut labels = Map::new();
    for (i, label) in INSIDER_LABELS.iter().enumerate() {
        labels.insert((*label).into(), json!(i + 1));
    }
    let payload = json!({
        "suspicion_score": score,
        "score_word": "123",
        "events": ticks.events().len(),
        "feature_dimension": feature_dimension,
        "labels": labels,
        "coefficients": coefficient_map(sig.tensor().word_map()),
        "note": "feature_dimension counts every word of length <= 3 over the 3 categories \
                 (1 + 3 + 9 + 27 = 40); the back-of-envelope 3^4 = 81 counts length-4 words \
                 and does not apply to this depth-3 feature set",
    });
    let report = builder.finish(payload);
    emit(&report, args.common.output.as_deref())
}
