//! Persistence: line-oriented instance files, CSV sample files, and
//! ground-state files. All writers emit canonical, byte-deterministic
//! output (sorted keys, LF endings, 17-significant-digit coefficients) so
//! identical inputs always produce identical files.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::exact::GroundState;
use crate::model::{close_rel, PolynomialModel, SampleRecord, SampleSet, SpinAssignment};
use crate::reduce::ReductionMap;

pub const FORMAT_VERSION: u32 = 1;

/// Looser than the in-memory 1e-9 invariant: external producers may use
/// different summation orders.
pub const SAMPLE_ENERGY_RTOL: f64 = 1e-6;

/// Header block of an instance file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceMeta {
    pub format_version: u32,
    pub class_tag: String,
    pub num_variables: usize,
    /// Seed provenance and reduction bookkeeping, serialized sorted by key.
    pub extra: BTreeMap<String, String>,
}

impl InstanceMeta {
    pub fn new(class_tag: &str, num_variables: usize) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            class_tag: class_tag.to_string(),
            num_variables,
            extra: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.extra.insert(key.to_string(), value.to_string());
        self
    }
}

/// Parsed instance file: the model, its metadata, and any auxiliary
/// definitions (present for reduced models).
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub model: PolynomialModel,
    pub meta: InstanceMeta,
    pub aux_defs: Vec<(usize, (usize, usize))>,
}

fn coeff(value: f64) -> String {
    format!("{value:.16e}")
}

/// Serialize a model to the sectioned instance format.
pub fn instance_to_string(
    model: &PolynomialModel,
    meta: &InstanceMeta,
    aux_defs: &[(usize, (usize, usize))],
) -> String {
    let mut out = String::new();
    out.push_str("[meta]\n");
    let _ = writeln!(out, "format_version {}", meta.format_version);
    let _ = writeln!(out, "class {}", meta.class_tag);
    let _ = writeln!(out, "num_variables {}", meta.num_variables);
    for (key, value) in &meta.extra {
        let _ = writeln!(out, "{key} {value}");
    }
    out.push_str("[linear]\n");
    for &(i, h) in model.linear_terms() {
        let _ = writeln!(out, "{i} {}", coeff(h));
    }
    out.push_str("[quadratic]\n");
    for &([i, j], c) in model.quadratic_terms() {
        let _ = writeln!(out, "{i} {j} {}", coeff(c));
    }
    out.push_str("[cubic]\n");
    for &([i, j, k], c) in model.cubic_terms() {
        let _ = writeln!(out, "{i} {j} {k} {}", coeff(c));
    }
    if !aux_defs.is_empty() {
        out.push_str("[aux]\n");
        for &(a, (i, j)) in aux_defs {
            let _ = writeln!(out, "{a} {i} {j}");
        }
    }
    out
}

pub fn write_instance(path: &Path, model: &PolynomialModel, meta: &InstanceMeta) -> Result<()> {
    write_str(path, &instance_to_string(model, meta, &[]))
}

/// Serialize a reduction: the reduced model with an `[aux]` section and
/// `original_n`, `penalty`, `offset` metadata, plus any extra meta entries.
pub fn write_reduction(
    path: &Path,
    rmap: &ReductionMap,
    class_tag: &str,
    extra: &BTreeMap<String, String>,
) -> Result<()> {
    let mut meta = InstanceMeta::new(class_tag, rmap.reduced_model.num_variables())
        .with("original_n", rmap.original_n)
        .with("penalty", coeff(rmap.penalty))
        .with("offset", coeff(rmap.offset));
    meta.extra
        .extend(extra.iter().map(|(k, v)| (k.clone(), v.clone())));
    write_str(
        path,
        &instance_to_string(&rmap.reduced_model, &meta, &rmap.aux_defs),
    )
}

pub fn read_instance(path: &Path) -> Result<InstanceFile> {
    let text = read_str(path)?;
    parse_instance_str(&text, &path.display().to_string())
}

/// Reassemble a [`ReductionMap`] from a reduced instance file.
pub fn read_reduction(path: &Path) -> Result<(ReductionMap, InstanceMeta)> {
    let file = read_instance(path)?;
    let get = |key: &str| -> Result<&String> {
        file.meta.extra.get(key).ok_or_else(|| {
            Error::parse(
                &path.display().to_string(),
                1,
                format!("reduction file is missing meta key {key}"),
            )
        })
    };
    let original_n: usize = get("original_n")?
        .parse()
        .map_err(|_| Error::parse(&path.display().to_string(), 1, "invalid original_n"))?;
    let penalty: f64 = get("penalty")?
        .parse()
        .map_err(|_| Error::parse(&path.display().to_string(), 1, "invalid penalty"))?;
    let offset: f64 = get("offset")?
        .parse()
        .map_err(|_| Error::parse(&path.display().to_string(), 1, "invalid offset"))?;
    let rmap = ReductionMap {
        original_n,
        reduced_model: file.model,
        aux_defs: file.aux_defs,
        penalty,
        offset,
    };
    Ok((rmap, file.meta))
}

pub fn parse_instance_str(text: &str, source: &str) -> Result<InstanceFile> {
    #[derive(PartialEq, Clone, Copy)]
    enum Section {
        None,
        Meta,
        Linear,
        Quadratic,
        Cubic,
        Aux,
    }

    let mut section = Section::None;
    let mut format_version = None;
    let mut class_tag = None;
    let mut num_variables: Option<usize> = None;
    let mut extra = BTreeMap::new();
    let mut linear: BTreeMap<usize, f64> = BTreeMap::new();
    let mut quadratic: BTreeMap<[usize; 2], f64> = BTreeMap::new();
    let mut cubic: BTreeMap<[usize; 3], f64> = BTreeMap::new();
    let mut aux_defs: Vec<(usize, (usize, usize))> = Vec::new();
    let mut aux_seen: BTreeSet<usize> = BTreeSet::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::parse(source, lineno + 1, msg);
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = match name {
                "meta" => Section::Meta,
                "linear" => Section::Linear,
                "quadratic" => Section::Quadratic,
                "cubic" => Section::Cubic,
                "aux" => Section::Aux,
                other => return Err(err(format!("unknown section [{other}]"))),
            };
            continue;
        }
        let n_known = |num_variables: Option<usize>| -> Result<usize> {
            num_variables
                .ok_or_else(|| Error::parse(source, lineno + 1, "term listed before num_variables"))
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse_index = |tok: &str, n: usize| -> Result<usize> {
            let idx: usize = tok
                .parse()
                .map_err(|_| Error::parse(source, lineno + 1, format!("invalid index {tok:?}")))?;
            if idx >= n {
                return Err(Error::parse(
                    source,
                    lineno + 1,
                    format!("index {idx} out of range for {n} variables"),
                ));
            }
            Ok(idx)
        };
        let parse_coeff = |tok: &str| -> Result<f64> {
            tok.parse::<f64>().map_err(|_| {
                Error::parse(source, lineno + 1, format!("invalid coefficient {tok:?}"))
            })
        };

        match section {
            Section::None => return Err(err("content before any section header".to_string())),
            Section::Meta => {
                let Some((key, value)) = line.split_once(char::is_whitespace) else {
                    return Err(err("expected `key value`".to_string()));
                };
                let value = value.trim().to_string();
                match key {
                    "format_version" => {
                        let v: u32 = value
                            .parse()
                            .map_err(|_| err("invalid format_version".to_string()))?;
                        if v != FORMAT_VERSION {
                            return Err(err(format!("unsupported format_version {v}")));
                        }
                        format_version = Some(v);
                    }
                    "class" => class_tag = Some(value),
                    "num_variables" => {
                        num_variables = Some(
                            value
                                .parse()
                                .map_err(|_| err("invalid num_variables".to_string()))?,
                        )
                    }
                    other => {
                        extra.insert(other.to_string(), value);
                    }
                }
            }
            Section::Linear => {
                let n = n_known(num_variables)?;
                if fields.len() != 2 {
                    return Err(err("expected `i h`".to_string()));
                }
                let i = parse_index(fields[0], n)?;
                let h = parse_coeff(fields[1])?;
                if linear.insert(i, h).is_some() {
                    return Err(err(format!("duplicate linear key {i}")));
                }
            }
            Section::Quadratic => {
                let n = n_known(num_variables)?;
                if fields.len() != 3 {
                    return Err(err("expected `i j J`".to_string()));
                }
                let i = parse_index(fields[0], n)?;
                let j = parse_index(fields[1], n)?;
                if i == j {
                    return Err(err(format!("repeated index in pair ({i}, {j})")));
                }
                let key = [i.min(j), i.max(j)];
                let c = parse_coeff(fields[2])?;
                if quadratic.insert(key, c).is_some() {
                    return Err(err(format!(
                        "duplicate quadratic key ({}, {})",
                        key[0], key[1]
                    )));
                }
            }
            Section::Cubic => {
                let n = n_known(num_variables)?;
                if fields.len() != 4 {
                    return Err(err("expected `i j k K`".to_string()));
                }
                let mut key = [
                    parse_index(fields[0], n)?,
                    parse_index(fields[1], n)?,
                    parse_index(fields[2], n)?,
                ];
                key.sort_unstable();
                if key[0] == key[1] || key[1] == key[2] {
                    return Err(err("repeated index in triple".to_string()));
                }
                let c = parse_coeff(fields[3])?;
                if cubic.insert(key, c).is_some() {
                    return Err(err(format!(
                        "duplicate cubic key ({}, {}, {})",
                        key[0], key[1], key[2]
                    )));
                }
            }
            Section::Aux => {
                let n = n_known(num_variables)?;
                if fields.len() != 3 {
                    return Err(err("expected `a i j`".to_string()));
                }
                let a = parse_index(fields[0], n)?;
                let i = parse_index(fields[1], n)?;
                let j = parse_index(fields[2], n)?;
                if !aux_seen.insert(a) {
                    return Err(err(format!("duplicate auxiliary index {a}")));
                }
                aux_defs.push((a, (i.min(j), i.max(j))));
            }
        }
    }

    let meta = InstanceMeta {
        format_version: format_version
            .ok_or_else(|| Error::parse(source, 1, "missing format_version"))?,
        class_tag: class_tag.ok_or_else(|| Error::parse(source, 1, "missing class"))?,
        num_variables: num_variables
            .ok_or_else(|| Error::parse(source, 1, "missing num_variables"))?,
        extra,
    };
    let model = PolynomialModel::from_sorted_maps(meta.num_variables, linear, quadratic, cubic);
    Ok(InstanceFile {
        model,
        meta,
        aux_defs,
    })
}

/// Samples read back from disk; rows whose stored energy disagreed with
/// the recomputation beyond [`SAMPLE_ENERGY_RTOL`] were corrected (the
/// recomputed energy is authoritative) and are listed here.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedSamples {
    pub samples: SampleSet,
    pub corrected_rows: Vec<usize>,
}

/// CSV with a `#`-prefixed metadata header block.
pub fn samples_to_string(samples: &SampleSet) -> String {
    let mut out = String::new();
    out.push_str("# spinbench-samples v1\n");
    for (key, value) in &samples.metadata {
        let _ = writeln!(out, "# {key} {value}");
    }
    out.push_str("assignment,energy,block_id\n");
    for rec in &samples.records {
        let _ = writeln!(
            out,
            "{},{},{}",
            rec.assignment.to_sign_string(),
            coeff(rec.energy),
            rec.block_id
        );
    }
    out
}

pub fn write_samples(path: &Path, samples: &SampleSet) -> Result<()> {
    write_str(path, &samples_to_string(samples))
}

/// Load and validate samples against their instance. Stored energies are
/// checked within [`SAMPLE_ENERGY_RTOL`]; mismatching rows are replaced by
/// the recomputed energy and reported.
pub fn read_samples(path: &Path, model: &PolynomialModel) -> Result<LoadedSamples> {
    let text = read_str(path)?;
    parse_samples(&text, &path.display().to_string(), model)
}

pub fn parse_samples(text: &str, source: &str, model: &PolynomialModel) -> Result<LoadedSamples> {
    let mut metadata = BTreeMap::new();
    let mut records = Vec::new();
    let mut corrected_rows = Vec::new();
    let mut saw_header = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::parse(source, lineno + 1, msg);
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some((key, value)) = comment.split_once(char::is_whitespace) {
                if !key.contains("spinbench-samples") {
                    metadata.insert(key.to_string(), value.trim().to_string());
                }
            }
            continue;
        }
        if line == "assignment,energy,block_id" {
            saw_header = true;
            continue;
        }
        if !saw_header {
            return Err(err(
                "expected `assignment,energy,block_id` header".to_string()
            ));
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(err("expected three comma-separated fields".to_string()));
        }
        let assignment =
            SpinAssignment::from_sign_str(fields[0].trim()).map_err(|e| err(e.to_string()))?;
        if assignment.len() != model.num_variables() {
            return Err(err(format!(
                "assignment length {} does not match instance size {}",
                assignment.len(),
                model.num_variables()
            )));
        }
        let stored: f64 = fields[1]
            .trim()
            .parse()
            .map_err(|_| err("invalid energy".to_string()))?;
        let block_id: usize = fields[2]
            .trim()
            .parse()
            .map_err(|_| err("invalid block_id".to_string()))?;
        let recomputed = model.energy(&assignment)?;
        let energy = if close_rel(stored, recomputed, SAMPLE_ENERGY_RTOL) {
            stored
        } else {
            corrected_rows.push(records.len());
            recomputed
        };
        records.push(SampleRecord {
            assignment,
            energy,
            block_id,
        });
    }
    let mut samples = SampleSet::new(records);
    samples.metadata = metadata;
    Ok(LoadedSamples {
        samples,
        corrected_rows,
    })
}

/// Ground-state file: `key value` lines.
pub fn ground_state_to_string(gs: &GroundState, extra: &BTreeMap<String, String>) -> String {
    let mut out = String::new();
    out.push_str("# spinbench-ground-state v1\n");
    let _ = writeln!(out, "energy {}", coeff(gs.energy));
    let _ = writeln!(out, "assignment {}", gs.assignment.to_sign_string());
    let _ = writeln!(out, "degenerate {}", gs.degenerate);
    for (key, value) in extra {
        let _ = writeln!(out, "{key} {value}");
    }
    out
}

pub fn write_ground_state(
    path: &Path,
    gs: &GroundState,
    extra: &BTreeMap<String, String>,
) -> Result<()> {
    write_str(path, &ground_state_to_string(gs, extra))
}

pub fn read_ground_state(path: &Path) -> Result<(GroundState, BTreeMap<String, String>)> {
    let text = read_str(path)?;
    let source = path.display().to_string();
    let mut energy = None;
    let mut assignment = None;
    let mut degenerate = None;
    let mut extra = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| Error::parse(&source, lineno + 1, msg);
        let Some((key, value)) = line.split_once(char::is_whitespace) else {
            return Err(err("expected `key value`"));
        };
        let value = value.trim();
        match key {
            "energy" => energy = Some(value.parse::<f64>().map_err(|_| err("invalid energy"))?),
            "assignment" => assignment = Some(SpinAssignment::from_sign_str(value)?),
            "degenerate" => {
                degenerate = Some(value.parse::<bool>().map_err(|_| err("invalid flag"))?)
            }
            other => {
                extra.insert(other.to_string(), value.to_string());
            }
        }
    }
    let gs = GroundState {
        energy: energy.ok_or_else(|| Error::parse(&source, 1, "missing energy"))?,
        assignment: assignment.ok_or_else(|| Error::parse(&source, 1, "missing assignment"))?,
        degenerate: degenerate.ok_or_else(|| Error::parse(&source, 1, "missing degenerate"))?,
    };
    Ok((gs, extra))
}

fn write_str(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| Error::io(&path.display().to_string(), e))
}

fn read_str(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(&path.display().to_string(), e))
}
