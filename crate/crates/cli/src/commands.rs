use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde_json::{json, Value};
use slackspace::cone::FacetBasisChoice;
use slackspace::gale::{dual_plucker, gale_transform, slack_from_gale, GaleConfiguration};
use slackspace::grassmannian::{grr, grv, plucker, plucker_ideal, section_ideal, vgr, PluckerVector};
use slackspace::io::{MatrixJson, PluckerJson, VhJson};
use slackspace::pipeline::{check_realizability, default_reduction, CheckReport};
use slackspace::reduced::ReducedSlackMatrix;
use slackspace::slack::{equal_up_to_column_scaling, slack_from_vh, symbolic_slack};
use slackspace::AbstractCone;
use slackspace_algebra::{Ideal, Polynomial, QMatrix};

use crate::args::{Cli, Command, IdealMode, Model, Options};
use crate::failure::{Failure, Outcome};
use crate::input::{cone_from_json, is_cone, parse, read_cone, read_job, read_numeric, read_plucker, read_value};

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Slack { input } => slack(opts, input),
        Command::Ideal { mode, input, k, v } => ideal(opts, *mode, input.as_deref(), *k, *v),
        Command::Check { inputs } => check(opts, inputs),
        Command::Convert { from, to, input, cone, round_trip } => {
            convert(opts, *from, *to, input, cone.as_deref(), *round_trip)
        }
    }
}

fn emit(opts: &Options, value: &Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match &opts.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn zero_based(v: &[usize], bound: usize, what: &str) -> Result<Vec<usize>, Failure> {
    v.iter()
        .map(|&i| match i {
            1.. if i <= bound => Ok(i - 1),
            _ => Err(Failure::Input(format!("{what} {i} outside 1..={bound}"))),
        })
        .collect()
}

fn reduction(opts: &Options, cone: &AbstractCone) -> Result<Vec<usize>, Failure> {
    match &opts.facets {
        Some(f) => zero_based(f, cone.num_facets(), "facet"),
        None => Ok(default_reduction(cone)),
    }
}

fn facet_bases(opts: &Options, cone: &AbstractCone) -> Result<FacetBasisChoice, Failure> {
    let mut overrides = BTreeMap::new();
    for (facet, verts) in opts.bases_map() {
        let j = zero_based(&[facet], cone.num_facets(), "facet")?[0];
        overrides.insert(j, zero_based(&verts, cone.v, "vertex")?);
    }
    Ok(cone.choose_facet_bases(&overrides)?)
}

fn need<'a>(input: Option<&'a Path>, what: &str) -> Result<&'a Path, Failure> {
    input.ok_or_else(|| Failure::Input(format!("{what} needs an input file")))
}

fn slack(opts: &Options, input: &Path) -> Result<Outcome, Failure> {
    let v = read_value(input)?;
    let matrix = if is_cone(&v) {
        let cone = cone_from_json(&parse(v, "cone")?)?;
        let full = symbolic_slack(&cone);
        let s = match &opts.facets {
            Some(f) => full.select_columns(&zero_based(f, cone.num_facets(), "facet")?),
            None => full,
        };
        eprintln!("symbolic {}x{} slack matrix in {} variables", s.matrix.rows(), s.matrix.cols(), s.ring().len());
        MatrixJson::from_poly(&s.matrix)
    } else if v.get("vertices").is_some() && v.get("W").is_some() {
        let vh: VhJson = parse(v, "V/H description")?;
        let (normals, offsets) = vh.inequalities()?;
        let s = slack_from_vh(&vh.vertex_matrix()?, &normals, &offsets)?;
        if let Some((i, j)) = negative_entry(&s) {
            return Err(Failure::Input(format!("vertex {} violates inequality {}", i + 1, j + 1)));
        }
        eprintln!("numeric {}x{} slack matrix of rank {}", s.rows(), s.cols(), s.rank());
        MatrixJson::from_numeric(&s)
    } else {
        return Err(Failure::Input("expected a cone (d, v, facets) or vertices with W and w".into()));
    };
    emit(opts, &serde_json::to_value(matrix)?)?;
    Ok(Outcome::Done)
}

fn negative_entry(s: &QMatrix) -> Option<(usize, usize)> {
    (0..s.rows()).flat_map(|i| (0..s.cols()).map(move |j| (i, j))).find(|&(i, j)| s.get(i, j).is_negative())
}

fn ideal(
    opts: &Options,
    mode: IdealMode,
    input: Option<&Path>,
    k: Option<usize>,
    v: Option<usize>,
) -> Result<Outcome, Failure> {
    let limits = opts.limits();
    let ideal: Ideal = match mode {
        IdealMode::Plucker => {
            let (k, v) = match (k, v, input) {
                (Some(k), Some(v), _) => (k, v),
                (_, _, Some(path)) => {
                    let cone = read_cone(path)?;
                    (cone.d + 1, cone.v)
                }
                _ => return Err(Failure::Input("plucker needs --k and --v, or a cone".into())),
            };
            if k == 0 || k > v {
                return Err(Failure::Input(format!("need 0 < k <= v, got k={k}, v={v}")));
            }
            plucker_ideal(k, v)
        }
        IdealMode::Slack => symbolic_slack(&read_cone(need(input, "slack")?)?).slack_ideal(&limits)?,
        IdealMode::Section => {
            let cone = read_cone(need(input, "section")?)?;
            section_ideal(&cone, &facet_bases(opts, &cone)?, &limits)?
        }
        IdealMode::Reduced => {
            let cone = read_cone(need(input, "reduced")?)?;
            ReducedSlackMatrix::new(&cone, &reduction(opts, &cone)?)?.slack_ideal(&limits)?
        }
    };
    let gens: Vec<Polynomial> = match opts.order {
        Some(order) => ideal.groebner(&order.into(), &limits)?.elements().to_vec(),
        None if ideal.is_homogeneous() => ideal.minimal_generators(&limits)?,
        None => ideal.generators().to_vec(),
    };
    let max_degree = gens.iter().map(Polynomial::total_degree).max().unwrap_or(0);
    eprintln!("{} generators, max degree {max_degree}", gens.len());
    let order = opts.order.map(|o| format!("{o:?}").to_lowercase());
    emit(
        opts,
        &json!({
            "variables": ideal.ring().names(),
            "order": order,
            "generators": gens.iter().map(ToString::to_string).collect::<Vec<_>>(),
        }),
    )?;
    Ok(Outcome::Done)
}

fn check_one(opts: &Options, path: &Path) -> Result<CheckReport, Failure> {
    let (cone, mut job) = read_job(path)?;
    if let Some(f) = &opts.facets {
        job.facets = Some(f.clone());
    }
    job.bases.extend(opts.bases_map());
    Ok(check_realizability(&cone, &job, &opts.limits())?)
}

fn check(opts: &Options, inputs: &[PathBuf]) -> Result<Outcome, Failure> {
    let results: Vec<Mutex<Option<Result<CheckReport, Failure>>>> = inputs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = (opts.jobs as usize).min(inputs.len()).max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = inputs.get(i) else { break };
                *results[i].lock().unwrap() = Some(check_one(opts, path));
            });
        }
    });
    let mut worst = 0;
    let mut values = Vec::new();
    for (path, slot) in inputs.iter().zip(results) {
        let result = slot.into_inner().unwrap().expect("every input is checked");
        let name = path.display().to_string();
        worst = worst.max(match &result {
            Ok(r) if r.is_realizable_verdict() => 0,
            Ok(_) => 1,
            Err(f) => f.exit_code(),
        });
        match result {
            Ok(report) => {
                match report.certificate() {
                    Some(cert) => eprintln!("{name}: not realizable ({}): {}", cert.kind(), cert.summary()),
                    None => eprintln!("{name}: no obstruction found"),
                }
                if opts.verbose {
                    for line in &report.log {
                        eprintln!("  {line}");
                    }
                }
                let mut v = serde_json::to_value(&report)?;
                v.as_object_mut().expect("report is an object").insert("input".into(), name.into());
                values.push(v);
            }
            Err(f) => {
                eprintln!("{name}: {f}");
                values.push(json!({ "input": name, "error": f.message(), "exit_code": f.exit_code() }));
            }
        }
    }
    let out = if values.len() == 1 { values.pop().unwrap() } else { Value::Array(values) };
    emit(opts, &out)?;
    Ok(match worst {
        0 => Outcome::Done,
        1 => Outcome::NotRealizable,
        c => Outcome::Failed(c),
    })
}

fn cone_for(opts: &Options, path: Option<&Path>, what: &str) -> Result<(std::sync::Arc<AbstractCone>, FacetBasisChoice), Failure> {
    let path = path.ok_or_else(|| Failure::Input(format!("{what} needs --cone")))?;
    let cone = read_cone(path)?;
    let bases = facet_bases(opts, &cone)?;
    Ok((cone, bases))
}

fn round_trip_failed(what: &str) -> Failure {
    Failure::Input(format!("round trip failed: {what}"))
}

fn plucker_json(p: &PluckerVector) -> Result<Value, Failure> {
    Ok(serde_json::to_value(PluckerJson::from(p))?)
}

fn convert(
    opts: &Options,
    from: Model,
    to: Model,
    input: &Path,
    cone: Option<&Path>,
    round_trip: bool,
) -> Result<Outcome, Failure> {
    let out = match (from, to) {
        (Model::Matrix, Model::Plucker) => {
            let p = plucker(&read_numeric(input)?)?;
            if round_trip && !plucker(&grr(&p)?)?.projectively_equal(&p) {
                return Err(round_trip_failed("pl(GrR(p)) differs from p"));
            }
            plucker_json(&p)?
        }
        (Model::Plucker, Model::Matrix) => serde_json::to_value(MatrixJson::from_numeric(&grr(&read_plucker(input)?)?))?,
        (Model::Matrix | Model::Plucker, Model::Slack) => {
            let (cone, bases) = cone_for(opts, cone, "conversion to slack")?;
            let p = match from {
                Model::Matrix => plucker(&read_numeric(input)?)?,
                _ => read_plucker(input)?,
            };
            let s = grv(&p, &cone, &bases)?;
            if round_trip && !vgr(&s, p.k)?.projectively_equal(&p) {
                return Err(round_trip_failed("VGr(GrV(p)) differs from p"));
            }
            serde_json::to_value(MatrixJson::from_numeric(&s))?
        }
        (Model::Slack, Model::Plucker) => {
            let s = read_numeric(input)?;
            let p = vgr(&s, s.rank())?;
            if round_trip {
                let (c, bases) = cone_for(opts, cone, "the round trip")?;
                if !equal_up_to_column_scaling(&s, &grv(&p, &c, &bases)?) {
                    return Err(round_trip_failed("GrV(VGr(S)) is not a column scaling of S"));
                }
            }
            plucker_json(&p)?
        }
        (Model::Slack, Model::Gale) => {
            let s = read_numeric(input)?;
            let g = gale_transform(&s, s.rank())?;
            if round_trip {
                let (c, bases) = cone_for(opts, cone, "the round trip")?;
                if !equal_up_to_column_scaling(&s, &slack_from_gale(&g, &c, &bases)?) {
                    return Err(round_trip_failed("the slack matrix of the Gale transform is not a column scaling of S"));
                }
            }
            json!({
                "matrix": MatrixJson::from_numeric(&g.matrix),
                "dual_plucker": plucker_json(&plucker(&g.matrix)?)?,
            })
        }
        (Model::Gale, Model::Slack) => {
            let (c, bases) = cone_for(opts, cone, "conversion from Gale")?;
            let g = GaleConfiguration::new(read_numeric(input)?)?;
            let s = slack_from_gale(&g, &c, &bases)?;
            if round_trip && !gale_transform(&s, c.d + 1)?.matrix.same_column_space(&g.matrix) {
                return Err(round_trip_failed("the Gale transform of the result spans a different space"));
            }
            serde_json::to_value(MatrixJson::from_numeric(&s))?
        }
        (Model::Plucker, Model::Dual) | (Model::Dual, Model::Plucker) => {
            let p = read_plucker(input)?;
            let q = dual_plucker(&p);
            if round_trip && !dual_plucker(&q).projectively_equal(&p) {
                return Err(round_trip_failed("the dual is not an involution here"));
            }
            plucker_json(&q)?
        }
        (from, to) => {
            return Err(Failure::Input(format!("no conversion from {from:?} to {to:?}").to_lowercase()));
        }
    };
    if round_trip {
        eprintln!("round trip: ok");
    }
    emit(opts, &out)?;
    Ok(Outcome::Done)
}
