use rayon::prelude::*;
use serde_json::{json, Value};
use shearer_core::bounds::parse_closed_form;
use shearer_core::scalar::parse_rational;
use shearer_core::{
    a_estimate, boundary_crossing, closed_form, construct_measure, counterexample, dominated_value, fp_check,
    kfuzz_halfball_brf, kfuzz_halfball_sigma, lll_check, membership, necessary_check, ovoep, russo_sample,
    shape_ovoep, spiral_order, strassen_dominates, telescoping, thm2_vector, upset_dominates, xi_dc,
    xi_enumerate, xi_log_density, xi_table, Backend, BigRational, Dist, Error, Graph, GridShape, ParamVec,
    Scalar, VertexSubset, WeightVec,
};

use crate::input::{self, OptGraphArgs};
use crate::output::{bits, bool_bits, float, num, nums, Artifact};
use crate::{Cli, CliError, Command, DomMethod, GridOp, MeasureSource, SweepOf, XiMethod};

type Out = Result<Artifact, CliError>;

fn subset_json(w: VertexSubset) -> Value {
    Value::Array(w.iter().map(|v| json!(v)).collect())
}

fn tag<S: Scalar>(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("backend".into(), json!(S::BACKEND.as_str()));
    }
    v
}

fn float_tag(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("backend".into(), json!(Backend::Float.as_str()));
    }
    v
}

fn need<'a>(v: &'a Option<String>, what: &str) -> Result<&'a str, CliError> {
    v.as_deref().ok_or_else(|| CliError::Usage(format!("missing --{what}")))
}

pub fn run<S: Scalar>(cli: &Cli) -> Out {
    match &cli.command {
        Command::Xi { graph, p, method } => {
            let g = graph.load()?;
            let p = input::parse_params::<S>(p, g.n())?;
            match method {
                XiMethod::Dc => Ok(Artifact::Record(tag::<S>(json!({ "xi": num(&xi_dc(&g, &p)?) })))),
                XiMethod::Enumerate => {
                    let xi = xi_enumerate(&g, &WeightVec::shearer(&p))?;
                    Ok(Artifact::Record(tag::<S>(json!({ "xi": num(&xi) }))))
                }
                XiMethod::Table => {
                    let table = xi_table(&g, &p)?;
                    let rows = table
                        .iter()
                        .enumerate()
                        .map(|(mask, x)| vec![json!(bits(mask, g.n())), num(x), json!(S::BACKEND.as_str())])
                        .collect();
                    Ok(Artifact::table(&["subset", "xi", "backend"], rows))
                }
            }
        }
        Command::Member { graph, p } => {
            let g = graph.load()?;
            let p = input::parse_params::<S>(p, g.n())?;
            Ok(Artifact::Record(member_json(&g, &p)?))
        }
        Command::Boundary { graph, p } => {
            let g = graph.load()?;
            let p = input::parse_params::<S>(p, g.n())?;
            let (r, t) = boundary_crossing(&g, &p)?;
            Ok(Artifact::Record(tag::<S>(json!({ "t": num(&t), "r": nums(r.as_slice()) }))))
        }
        Command::Measure { graph, p } => {
            let g = graph.load()?;
            let p = input::parse_params::<S>(p, g.n())?;
            match construct_measure(&g, &p) {
                Ok(d) => Ok(Artifact::Record(d.to_json())),
                // a signed "measure" is an answer, not a failure
                Err(Error::SignedMeasure { config, mass }) => Ok(Artifact::Record(tag::<S>(json!({
                    "status": "SignedMeasure",
                    "config": bits(config, g.n()),
                    "mass": float(mass),
                })))),
                Err(e) => Err(e.into()),
            }
        }
        Command::Ovoep { graph, p, w, v } => {
            let g = graph.load()?;
            let p = input::parse_params::<S>(p, g.n())?;
            let w = input::parse_subset(w)?;
            let q = ovoep(&g, w, *v, &p)?;
            Ok(Artifact::Record(tag::<S>(json!({ "w": subset_json(w), "v": v, "ovoep": num(&q) }))))
        }
        Command::Bounds { op, graph, p, d, k, infinite, s, radius } => {
            bounds::<S>(op, graph, p, *d, *k, infinite, s, *radius)
        }
        Command::Dominate { y, x, product, method } => {
            let dy = input::load_dist::<S>(y)?;
            let dx = match (x, product) {
                (Some(path), _) => input::load_dist::<S>(path)?,
                (None, Some(c)) => Dist::product(&input::parse_params::<S>(c, dy.n())?)?,
                (None, None) => return Err(CliError::Usage("give --x or --product".into())),
            };
            let v = match method {
                DomMethod::Strassen => {
                    let r = strassen_dominates(&dy, &dx)?;
                    json!({
                        "dominates": r.dominates,
                        "flow": num(&r.flow),
                        "plan": r.plan.map(|p| p.to_json()),
                        "violating_upset": r.violating_upset.map(|u| {
                            u.generators().into_iter().map(|c| bits(c, dy.n())).collect::<Vec<_>>()
                        }),
                    })
                }
                DomMethod::Upset => json!({ "dominates": upset_dominates(&dy, &dx)? }),
                DomMethod::Necessary => {
                    let (ones, zeros) = necessary_check(&dy, &dx)?;
                    json!({ "all_ones_condition": ones, "all_zeros_condition": zeros })
                }
            };
            Ok(Artifact::Record(tag::<S>(v)))
        }
        Command::Sigma { measure, graph, p, k, dist } => {
            let law: Dist<S> = match measure {
                MeasureSource::Shearer => {
                    let g = graph.require("shearer")?;
                    construct_measure(&g, &input::parse_params(need(p, "p")?, g.n())?)?
                }
                MeasureSource::Counterexample => {
                    let g = graph.require("counterexample")?;
                    counterexample(&g, &input::parse_params(need(p, "p")?, g.n())?)?.law
                }
                MeasureSource::Halfball => {
                    let k = k.ok_or_else(|| CliError::Usage("halfball needs --k".into()))?;
                    kfuzz_halfball_brf(k)?
                }
                MeasureSource::File => {
                    let path = dist.as_deref().ok_or_else(|| CliError::Usage("file needs --dist".into()))?;
                    input::load_dist(path)?
                }
            };
            let sigma = dominated_value(&law)?;
            Ok(Artifact::Record(tag::<S>(json!({ "n": law.n(), "sigma": num(&sigma) }))))
        }
        Command::Counterexample { graph, p, sigma } => {
            let g = graph.load()?;
            let p = input::parse_params::<S>(p, g.n())?;
            let ce = counterexample(&g, &p)?;
            let mut v = ce.law.to_json();
            let m = v.as_object_mut().expect("dist json is an object");
            m.insert("r".into(), nums(ce.r.as_slice()));
            m.insert("t".into(), num(&ce.t));
            m.insert("x".into(), nums(ce.x.as_slice()));
            if *sigma {
                m.insert("sigma".into(), num(&dominated_value(&ce.law)?));
            }
            Ok(Artifact::Record(v))
        }
        Command::Sample { graph, p, dist, count } => {
            let law: Dist<S> = match (dist, graph.load()?) {
                (Some(path), None) => input::load_dist(path)?,
                (None, Some(g)) => construct_measure(&g, &input::parse_params(need(p, "p")?, g.n())?)?,
                _ => return Err(CliError::Usage("give either --dist or a graph with --p".into())),
            };
            let draws: Vec<String> = law.sample(cli.seed, *count).into_iter().map(|c| bits(c, law.n())).collect();
            Ok(Artifact::Record(tag::<S>(json!({ "seed": cli.seed, "n": law.n(), "samples": draws }))))
        }
        Command::Russo { graph, p, x, count, draws } => {
            let g = graph.load()?;
            let p = input::parse_params::<S>(p, g.n())?;
            let law = construct_measure(&g, &p)?;
            let x = match x {
                Some(text) => input::parse_f64s(text, g.n())?,
                None => thm2_vector(&g, &p, VertexSubset::EMPTY)?.to_f64s(),
            };
            let cond = law.conditionals();
            let pairs = russo_sample(|prefix| cond.cond(prefix), &x, cli.seed, *count)?;
            Ok(Artifact::Record(float_tag(russo_summary(&pairs, &x, cli.seed, *draws))))
        }
        Command::Grid { op, p, side, shape, caps } => grid::<S>(*op, p, *side, shape, caps),
        Command::Sweep { of, graph, from, to, step, side, caps } => {
            sweep::<S>(*of, graph, from, to, step, *side, caps)
        }
    }
}

fn member_json<S: Scalar>(g: &Graph, p: &ParamVec<S>) -> Result<Value, CliError> {
    let st = membership(g, p)?;
    Ok(tag::<S>(json!({
        "status": format!("{:?}", st.region),
        "min_xi": num(&st.min_xi),
        "argmin": subset_json(st.argmin),
        "witness": st.witness.map(|(w, xi)| json!({ "subset": subset_json(w), "xi": num(&xi) })),
    })))
}

fn russo_summary(pairs: &[(Vec<bool>, Vec<bool>)], x: &[f64], seed: u64, include: bool) -> Value {
    let n = x.len();
    let count = pairs.len();
    let mut zf = vec![0usize; n];
    let mut xf = vec![0usize; n];
    let mut ordered = 0;
    for (z, xs) in pairs {
        if z.iter().zip(xs).all(|(&a, &b)| a >= b) {
            ordered += 1;
        }
        for v in 0..n {
            zf[v] += z[v] as usize;
            xf[v] += xs[v] as usize;
        }
    }
    let freq = |f: &[usize]| f.iter().map(|&c| c as f64 / count.max(1) as f64).collect::<Vec<_>>();
    let mut v = json!({
        "seed": seed,
        "count": count,
        "x_target": x,
        "ordered_pairs": ordered,
        "z_frequencies": freq(&zf),
        "x_frequencies": freq(&xf),
    });
    if include {
        v["draws"] = pairs
            .iter()
            .map(|(z, xs)| json!([bool_bits(z), bool_bits(xs)]))
            .collect();
    }
    v
}

#[allow(clippy::too_many_arguments)]
fn bounds<S: Scalar>(
    op: &str,
    graph: &OptGraphArgs,
    p: &Option<String>,
    d: Option<u32>,
    k: Option<u32>,
    infinite: &str,
    s: &Option<String>,
    radius: usize,
) -> Out {
    match op {
        "thm2" => {
            let g = graph.require("thm2")?;
            let p = input::parse_params::<S>(need(p, "p")?, g.n())?;
            let c = thm2_vector(&g, &p, input::parse_subset(infinite)?)?;
            Ok(Artifact::Record(tag::<S>(json!({ "name": "thm2", "c": nums(c.as_slice()) }))))
        }
        "lll" | "fp" => {
            let g = graph.require(op)?;
            let q: Vec<f64> = input::parse_f64s(need(p, "p")?, g.n())?.iter().map(|p| 1.0 - p).collect();
            let s = s.as_deref().map(|t| input::parse_f64s(t, g.n())).transpose()?;
            let check = if op == "lll" { lll_check(&g, &q, s.as_deref())? } else { fp_check(&g, &q, s.as_deref())? };
            Ok(Artifact::Record(float_tag(json!({
                "name": op,
                "satisfied": check.satisfied,
                "s": check.s,
                "iterations": check.iterations,
            }))))
        }
        "halfball" => {
            let k = k.ok_or_else(|| CliError::Usage("halfball needs --k".into()))?;
            Ok(Artifact::Record(float_tag(json!({ "name": "halfball", "k": k, "sigma": kfuzz_halfball_sigma(k) }))))
        }
        "intrinsic" => {
            let g = graph.require("intrinsic")?;
            let p = input::parse_params::<S>(need(p, "p")?, g.n())?;
            let rows = shearer_core::intrinsic_vector(&g, &p, radius)?
                .into_iter()
                .enumerate()
                .map(|(v, b)| {
                    vec![json!(v), num(&b.lower), num(&b.upper), subset_json(b.argmin), json!(S::BACKEND.as_str())]
                })
                .collect();
            Ok(Artifact::table(&["vertex", "lower", "upper", "argmin", "backend"], rows))
        }
        name => {
            let form = parse_closed_form::<S>(name, d, k, p.as_deref())?;
            let report = closed_form(&form)?;
            Ok(Artifact::Record(serde_json::to_value(report).expect("report serializes")))
        }
    }
}

fn grid<S: Scalar>(op: GridOp, p: &Option<String>, side: Option<usize>, shape: &Option<String>, caps: &str) -> Out {
    let side = || side.ok_or_else(|| CliError::Usage("missing --side".into()));
    match op {
        GridOp::Spiral => {
            let rows = spiral_order(side()?)
                .into_iter()
                .enumerate()
                .map(|(i, (x, y))| vec![json!(i), json!(x), json!(y)])
                .collect();
            Ok(Artifact::table(&["step", "x", "y"], rows))
        }
        GridOp::ShapeOvoep => {
            let (n, k, l) = input::parse_triple(need(shape, "shape")?)?;
            let p = S::parse_value(need(p, "p")?)?;
            let q = shape_ovoep(GridShape::new(n, k, l), &p)?;
            Ok(Artifact::Record(tag::<S>(json!({ "shape": [n, k, l], "ovoep": num(&q) }))))
        }
        GridOp::AEstimate => {
            let p = f64::parse_value(need(p, "p")?)?;
            let est = a_estimate(p, input::parse_triple(caps)?)?;
            Ok(Artifact::Record(float_tag(serde_json::to_value(est).expect("estimate serializes"))))
        }
        GridOp::Density => {
            let p = S::parse_value(need(p, "p")?)?;
            let n = side()?;
            Ok(Artifact::Record(float_tag(json!({ "side": n, "log_density": float(xi_log_density(n, &p)?) }))))
        }
        GridOp::Telescoping => {
            let p = S::parse_value(need(p, "p")?)?;
            let n = side()?;
            let t = telescoping(n, &p)?;
            let steps: Vec<Value> = t
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "cell": [s.cell.0, s.cell.1],
                        "ovoep": num(&s.ovoep),
                        "shape": s.shape.map(|sh| [sh.n, sh.k, sh.l]),
                    })
                })
                .collect();
            Ok(Artifact::Record(tag::<S>(json!({
                "side": n,
                "product": num(&t.product),
                "xi": num(&t.xi),
                "steps": steps,
            }))))
        }
    }
}

/// Grid points `from + i·step` computed exactly.
fn sweep_points(from: &str, to: &str, step: &str) -> Result<Vec<BigRational>, CliError> {
    let (from, to, step) = (parse_rational(from)?, parse_rational(to)?, parse_rational(step)?);
    if step <= BigRational::from_integer(0.into()) {
        return Err(CliError::Usage("--step must be positive".into()));
    }
    let mut out = Vec::new();
    let mut x = from;
    while x <= to {
        out.push(x.clone());
        x += step.clone();
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn sweep<S: Scalar>(
    of: SweepOf,
    graph: &OptGraphArgs,
    from: &str,
    to: &str,
    step: &str,
    side: Option<usize>,
    caps: &str,
) -> Out {
    let points = sweep_points(from, to, step)?;
    let g = match of {
        SweepOf::Density | SweepOf::AEstimate => None,
        _ => Some(graph.require("sweep")?),
    };
    let side = match of {
        SweepOf::Density => Some(side.ok_or_else(|| CliError::Usage("density sweep needs --side".into()))?),
        _ => None,
    };
    let caps = input::parse_triple(caps)?;
    let backend = match of {
        SweepOf::Lll | SweepOf::Fp | SweepOf::AEstimate => Backend::Float,
        _ => S::BACKEND,
    };

    let rows: Vec<Result<Vec<Value>, CliError>> = points
        .par_iter()
        .map(|r| {
            let p = S::from_rational(r);
            let point = match S::BACKEND {
                Backend::Float => float(p.to_f64()),
                Backend::Rational => json!(p.to_exact_string()),
            };
            let (value, status) = match sweep_point(of, g.as_ref(), &p, side, caps) {
                Ok(vs) => vs,
                Err(e @ (Error::CapExceeded { .. } | Error::Parse(_))) => return Err(e.into()),
                Err(e) => (Value::Null, format!("error: {e}")),
            };
            Ok(vec![point, json!(backend.as_str()), value, json!(status)])
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let argv: Vec<String> = std::env::args().skip(1).collect();
    Ok(Artifact::Table {
        comment: Some(format!("shearer {}", argv.join(" "))),
        header: ["p", "backend", "value", "status"].iter().map(|s| s.to_string()).collect(),
        rows,
    })
}

fn sweep_point<S: Scalar>(
    of: SweepOf,
    g: Option<&Graph>,
    p: &S,
    side: Option<usize>,
    caps: (usize, usize, usize),
) -> Result<(Value, String), Error> {
    let homogeneous = || ParamVec::homogeneous(g.expect("graph checked").n(), p.clone());
    let g_ = || g.expect("graph checked");
    let ok = |v: Value| (v, "ok".to_string());
    Ok(match of {
        SweepOf::Xi => ok(num(&xi_dc(g_(), &homogeneous()?)?)),
        SweepOf::Member => {
            let st = membership(g_(), &homogeneous()?)?;
            (num(&st.min_xi), format!("{:?}", st.region))
        }
        SweepOf::Boundary => match boundary_crossing(g_(), &homogeneous()?) {
            Ok((_, t)) => ok(num(&t)),
            Err(Error::AlreadyInterior) => (Value::Null, "Interior".into()),
            Err(e) => return Err(e),
        },
        SweepOf::Sigma => match construct_measure(g_(), &homogeneous()?) {
            Ok(d) => ok(num(&dominated_value(&d)?)),
            Err(Error::SignedMeasure { .. }) => (Value::Null, "SignedMeasure".into()),
            Err(e) => return Err(e),
        },
        SweepOf::Thm2 => {
            let c = thm2_vector(g_(), &homogeneous()?, VertexSubset::EMPTY)?;
            ok(json!(nums(c.as_slice()).to_string()))
        }
        SweepOf::Lll | SweepOf::Fp => {
            let q = vec![1.0 - p.to_f64(); g_().n()];
            let check = if of == SweepOf::Lll { lll_check(g_(), &q, None)? } else { fp_check(g_(), &q, None)? };
            ok(json!(check.satisfied))
        }
        SweepOf::Density => ok(float(xi_log_density(side.expect("side checked"), p)?)),
        SweepOf::AEstimate => ok(float(a_estimate(p.to_f64(), caps)?.value)),
    })
}
