use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde_json::Value;
use slackspace::io::{MatrixJson, PluckerJson, VhJson};
use slackspace::pipeline::{CheckJob, ConeSource};
use slackspace::{AbstractCone, ConeJson};
use slackspace_algebra::QMatrix;

use crate::failure::Failure;

pub fn read_value(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: malformed JSON: {e}", path.display())))
}

pub fn parse<T: DeserializeOwned>(v: Value, what: &str) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| Failure::Input(format!("not a {what}: {e}")))
}

/// A cone file has `d`, `v` and `facets`.
pub fn is_cone(v: &Value) -> bool {
    v.get("d").is_some() && v.get("facets").is_some()
}

/// Builds and validates a cone; structural problems are input errors.
pub fn cone_from_json(j: &ConeJson) -> Result<Arc<AbstractCone>, Failure> {
    let cone = AbstractCone::from_json(j)?;
    let problems = cone.validate();
    if !problems.is_empty() {
        let lines: Vec<String> = problems.iter().map(ToString::to_string).collect();
        return Err(Failure::Input(format!("invalid cone: {}", lines.join("; "))));
    }
    Ok(Arc::new(cone))
}

pub fn read_cone(path: &Path) -> Result<Arc<AbstractCone>, Failure> {
    let v = read_value(path)?;
    cone_from_json(&parse(v, "cone")?)
}

/// A job file, or a bare cone treated as a job with defaults. Cone paths
/// inside a job are relative to the job file.
pub fn read_job(path: &Path) -> Result<(Arc<AbstractCone>, CheckJob), Failure> {
    let v = read_value(path)?;
    if is_cone(&v) {
        return Ok((cone_from_json(&parse(v, "cone")?)?, CheckJob::default()));
    }
    let job: CheckJob = parse(v, "check job")?;
    let cone = match &job.cone {
        Some(ConeSource::Inline(j)) => cone_from_json(j)?,
        Some(ConeSource::Path(p)) => read_cone(&path.parent().unwrap_or(Path::new(".")).join(p))?,
        None => return Err(Failure::Input(format!("{}: job names no cone", path.display()))),
    };
    Ok((cone, job))
}

pub fn read_numeric(path: &Path) -> Result<QMatrix, Failure> {
    let v = read_value(path)?;
    // A Gale conversion writes `{"matrix": ..., "dual_plucker": ...}`.
    let v = match v.get("matrix") {
        Some(inner) if v.get("entries").is_none() => inner.clone(),
        _ => v,
    };
    if v.get("vertices").is_some() {
        return Ok(parse::<VhJson>(v, "vertex list")?.vertex_matrix()?);
    }
    Ok(parse::<MatrixJson>(v, "matrix")?.to_numeric()?)
}

pub fn read_plucker(path: &Path) -> Result<slackspace::grassmannian::PluckerVector, Failure> {
    Ok(parse::<PluckerJson>(read_value(path)?, "Plücker vector")?.to_vector()?)
}
