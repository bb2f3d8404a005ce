//! Subcommand dispatch: flags are resolved into a `Job` (pure data), `execute`
//! turns a job into a deterministic outcome, and `run` wraps that in report
//! rendering, exit codes, and the `verify` re-run.

use std::collections::HashMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use super::doc::{ints, obj, strs, Value};
use super::inputs::{
    load_action, load_monoid, load_probes, load_topology, load_universe_spec, load_window_map,
    resolve_input,
};
use super::report::{parse_report, render_report, write_atomic, Report};
use super::{Caps, CliError, NamedInput};
use crate::action::{extend_action, ExtendedAction};
use crate::completion::is_left_complete;
use crate::formula_text::{parse_formula, parse_node, print_formula, print_node};
use crate::hf::Store;
use crate::logic::{
    atomic_family, check_preserves_reflects, classify, delta0_family, eval, Embedding,
    HamkinsMap, ParamStrategy,
};
use crate::monoid::mask_points;
use crate::powder::{
    chirality_criterion, closed_image_probe, generate_probes, is_left_powder, is_right_powder,
    verify_certificate, CriterionOutcome, PowderVerdict, WindowKind, WindowMonoid,
};
use crate::symcore::{
    godel_closure_check, levy_sequence_probe, symmetric_core, FiniteStabOracle, SymbolicZOracle,
};

/// A parsed subcommand: plain data, serialisable into the report's `args`
/// field so `verify` can reconstruct the job.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommandSpec {
    UniverseBuild,
    ActionExtend,
    Stab { point: String },
    Core { symbolic_z: bool },
    LevyProbe { k: u64 },
    GodelCheck,
    PowderCheck,
    ChiralCriterion {
        window: usize,
        probes: usize,
        closed_image_levels: Vec<usize>,
    },
    CompleteCheck,
    Eval {
        formula: String,
        assigns: Vec<(String, String)>,
    },
    Elementarity {
        map: String,
        check: String,
        rank: usize,
        samples: Option<u32>,
    },
    Hamkins { check: String, rank: usize },
}

impl CommandSpec {
    pub fn name(&self) -> &'static str {
        match self {
            CommandSpec::UniverseBuild => "universe-build",
            CommandSpec::ActionExtend => "action-extend",
            CommandSpec::Stab { .. } => "stab",
            CommandSpec::Core { .. } => "core",
            CommandSpec::LevyProbe { .. } => "levy-probe",
            CommandSpec::GodelCheck => "godel-check",
            CommandSpec::PowderCheck => "powder-check",
            CommandSpec::ChiralCriterion { .. } => "chiral-criterion",
            CommandSpec::CompleteCheck => "complete-check",
            CommandSpec::Eval { .. } => "eval",
            CommandSpec::Elementarity { .. } => "elementarity",
            CommandSpec::Hamkins { .. } => "hamkins",
        }
    }

    pub fn to_args(&self) -> Value {
        match self {
            CommandSpec::UniverseBuild
            | CommandSpec::ActionExtend
            | CommandSpec::GodelCheck
            | CommandSpec::PowderCheck
            | CommandSpec::CompleteCheck => Value::Object(vec![]),
            CommandSpec::Core { symbolic_z } => {
                obj(vec![("symbolic_z", Value::Bool(*symbolic_z))])
            }
            CommandSpec::Stab { point } => obj(vec![("point", Value::Str(point.clone()))]),
            CommandSpec::LevyProbe { k } => obj(vec![("k", Value::Int(*k as i64))]),
            CommandSpec::ChiralCriterion {
                window,
                probes,
                closed_image_levels,
            } => obj(vec![
                ("window", Value::Int(*window as i64)),
                ("probes", Value::Int(*probes as i64)),
                ("closed_image_levels", ints(closed_image_levels.iter().copied())),
            ]),
            CommandSpec::Eval { formula, assigns } => obj(vec![
                ("formula", Value::Str(formula.clone())),
                (
                    "assigns",
                    Value::List(
                        assigns
                            .iter()
                            .map(|(k, v)| {
                                obj(vec![
                                    ("var", Value::Str(k.clone())),
                                    ("term", Value::Str(v.clone())),
                                ])
                            })
                            .collect(),
                    ),
                ),
            ]),
            CommandSpec::Elementarity {
                map,
                check,
                rank,
                samples,
            } => {
                let mut pairs = vec![
                    ("map", Value::Str(map.clone())),
                    ("check", Value::Str(check.clone())),
                    ("rank", Value::Int(*rank as i64)),
                ];
                if let Some(s) = samples {
                    pairs.push(("samples", Value::Int(*s as i64)));
                }
                obj(pairs)
            }
            CommandSpec::Hamkins { check, rank } => obj(vec![
                ("check", Value::Str(check.clone())),
                ("rank", Value::Int(*rank as i64)),
            ]),
        }
    }

    pub fn from_name_and_args(name: &str, args: &Value) -> Result<CommandSpec, CliError> {
        let bad = |msg: &str| CliError::Schema {
            name: "report".into(),
            message: msg.into(),
        };
        let str_field = |key: &str| -> Result<String, CliError> {
            args.field(key)
                .and_then(Value::as_str)
                .map(str::to_string)
                .ok_or_else(|| bad(&format!("args needs string `{key}`")))
        };
        let int_field = |key: &str| -> Result<i64, CliError> {
            args.field(key)
                .and_then(Value::as_int)
                .ok_or_else(|| bad(&format!("args needs integer `{key}`")))
        };
        Ok(match name {
            "universe-build" => CommandSpec::UniverseBuild,
            "action-extend" => CommandSpec::ActionExtend,
            "stab" => CommandSpec::Stab {
                point: str_field("point")?,
            },
            "core" => CommandSpec::Core {
                symbolic_z: args
                    .field("symbolic_z")
                    .and_then(Value::as_bool)
                    .unwrap_or(false),
            },
            "levy-probe" => CommandSpec::LevyProbe {
                k: int_field("k")? as u64,
            },
            "godel-check" => CommandSpec::GodelCheck,
            "powder-check" => CommandSpec::PowderCheck,
            "chiral-criterion" => CommandSpec::ChiralCriterion {
                window: int_field("window")? as usize,
                probes: int_field("probes")? as usize,
                closed_image_levels: args
                    .field("closed_image_levels")
                    .and_then(Value::as_list)
                    .map(|l| l.iter().filter_map(Value::as_usize).collect())
                    .unwrap_or_default(),
            },
            "complete-check" => CommandSpec::CompleteCheck,
            "eval" => CommandSpec::Eval {
                formula: str_field("formula")?,
                assigns: args
                    .field("assigns")
                    .and_then(Value::as_list)
                    .map(|l| {
                        l.iter()
                            .filter_map(|p| {
                                Some((
                                    p.field("var")?.as_str()?.to_string(),
                                    p.field("term")?.as_str()?.to_string(),
                                ))
                            })
                            .collect()
                    })
                    .unwrap_or_default(),
            },
            "elementarity" => CommandSpec::Elementarity {
                map: str_field("map")?,
                check: str_field("check")?,
                rank: int_field("rank")? as usize,
                samples: args
                    .field("samples")
                    .and_then(Value::as_int)
                    .map(|s| s as u32),
            },
            "hamkins" => CommandSpec::Hamkins {
                check: str_field("check")?,
                rank: int_field("rank")? as usize,
            },
            other => return Err(bad(&format!("unknown command `{other}`"))),
        })
    }
}

#[derive(Debug, Clone)]
pub struct Job {
    pub command: CommandSpec,
    pub inputs: Vec<NamedInput>,
    pub seed: u64,
    pub caps: Caps,
}

impl Job {
    fn input(&self, name: &'static str) -> Result<&NamedInput, CliError> {
        self.inputs
            .iter()
            .find(|i| i.name == name)
            .ok_or(CliError::MissingInput(name))
    }

    fn input_opt(&self, name: &str) -> Option<&NamedInput> {
        self.inputs.iter().find(|i| i.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub result: Value,
    pub witnesses: Vec<Value>,
    pub check_failed: bool,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome {
            result,
            witnesses: Vec::new(),
            check_failed: false,
        }
    }
}

fn verdict_value(m: &crate::monoid::FinMonoid, v: &PowderVerdict) -> Value {
    match v {
        PowderVerdict::Powder => obj(vec![("powder", Value::Bool(true))]),
        PowderVerdict::NotT0 { x, y } => obj(vec![
            ("powder", Value::Bool(false)),
            ("reason", Value::Word("not_t0".into())),
            (
                "pair",
                strs(vec![m.label(*x).to_string(), m.label(*y).to_string()]),
            ),
        ]),
        PowderVerdict::NoClopenBasis => obj(vec![
            ("powder", Value::Bool(false)),
            ("reason", Value::Word("no_clopen_basis".into())),
        ]),
        PowderVerdict::ISetNotOpen {
            basis_set,
            point,
            i_set,
        } => obj(vec![
            ("powder", Value::Bool(false)),
            ("reason", Value::Word("i_set_not_open".into())),
            ("basis_set", ints(mask_points(*basis_set, m.size()))),
            ("point", Value::Str(m.label(*point).to_string())),
            ("i_set", ints(mask_points(*i_set, m.size()))),
        ]),
    }
}

fn congruence_blocks(m: &crate::monoid::FinMonoid, r: &crate::monoid::LeftCongruence) -> Value {
    Value::List(
        r.classes()
            .into_iter()
            .map(|c| strs(c.into_iter().map(|x| m.label(x).to_string()).collect::<Vec<_>>()))
            .collect(),
    )
}

/// Run a job. Pure in the job's data: no filesystem, clock, or environment.
pub fn execute(job: &Job) -> Result<Outcome, CliError> {
    match &job.command {
        CommandSpec::UniverseBuild => {
            let spec = load_universe_spec(job.input("universe")?)?;
            let (_, u) = spec.build(job.caps.node_cap)?;
            Ok(Outcome::ok(obj(vec![
                ("rank", Value::Int(spec.rank as i64)),
                ("strata_sizes", ints(u.strata_sizes())),
                ("nodes", Value::Int(u.len() as i64)),
            ])))
        }
        CommandSpec::ActionExtend => {
            let act = load_action(job.input("action")?)?;
            let spec = load_universe_spec(job.input("universe")?)?;
            let (mut store, u) = spec.build(job.caps.node_cap)?;
            let ua = extend_action(&mut store, &act, &u)?;
            let monoid = ua.monoid().clone();
            let fixed: Vec<(String, Value)> = monoid
                .elements()
                .map(|g| {
                    let count = u.top().iter().filter(|&&n| ua.apply(g, n) == n).count();
                    (monoid.label(g).to_string(), Value::Int(count as i64))
                })
                .collect();
            let mut pairs = vec![
                ("monoid_size", Value::Int(monoid.size() as i64)),
                ("universe_nodes", Value::Int(u.len() as i64)),
                ("fixed_points", Value::Object(fixed)),
            ];
            if u.len() <= 48 {
                let mapping: Vec<Value> = monoid
                    .elements()
                    .map(|g| {
                        obj(vec![
                            ("element", Value::Str(monoid.label(g).to_string())),
                            (
                                "images",
                                strs(u
                                    .top()
                                    .iter()
                                    .map(|&n| {
                                        format!(
                                            "{} -> {}",
                                            print_node(&store, n),
                                            print_node(&store, ua.apply(g, n))
                                        )
                                    })
                                    .collect::<Vec<_>>()),
                            ),
                        ])
                    })
                    .collect();
                pairs.push(("mapping", Value::List(mapping)));
            }
            Ok(Outcome::ok(obj(pairs)))
        }
        CommandSpec::Stab { point } => {
            let act = load_action(job.input("action")?)?;
            let monoid = act.monoid().clone();
            let rel = match job.input_opt("universe") {
                Some(uinput) => {
                    let spec = load_universe_spec(uinput)?;
                    let (mut store, u) = spec.build(job.caps.node_cap)?;
                    let node = parse_node(&mut store, point)?;
                    if !u.contains(node) {
                        return Err(CliError::schema(
                            "point",
                            format!("`{point}` lies outside the universe"),
                        ));
                    }
                    let mut ext = ExtendedAction::new(&store, &act)?;
                    ext.stab_rel(&mut store, node)
                }
                None => {
                    let idx = act
                        .points()
                        .iter()
                        .position(|p| p == point)
                        .ok_or_else(|| {
                            CliError::schema("point", format!("`{point}` is not a carrier point"))
                        })?;
                    act.stab_rel(idx).rel
                }
            };
            Ok(Outcome::ok(obj(vec![
                ("point", Value::Str(point.clone())),
                ("blocks", congruence_blocks(&monoid, &rel)),
                ("is_full", Value::Bool(rel.is_full())),
                ("is_diagonal", Value::Bool(rel.is_diagonal())),
            ])))
        }
        CommandSpec::Core { symbolic_z } => {
            let spec = load_universe_spec(job.input("universe")?)?;
            let (mut store, u) = spec.build(job.caps.node_cap)?;
            let report = if *symbolic_z {
                let mut oracle = SymbolicZOracle;
                symmetric_core(&mut store, &u, &mut oracle)?
            } else {
                let act = load_action(job.input("action")?)?;
                let tau = load_topology(job.input("topology")?, act.monoid())?;
                let mut oracle = FiniteStabOracle::new(&store, &act, &tau)?;
                symmetric_core(&mut store, &u, &mut oracle)?
            };
            let transitive = crate::symcore::core_is_transitive(&store, &report);
            let mut pairs = vec![
                ("universe_nodes", Value::Int(u.len() as i64)),
                ("members", Value::Int(report.members.len() as i64)),
                ("excluded", Value::Int(report.excluded.len() as i64)),
                ("core_transitive", Value::Bool(transitive)),
            ];
            if report.members.len() <= 64 {
                pairs.push((
                    "member_nodes",
                    strs(report
                        .members
                        .iter()
                        .map(|&n| print_node(&store, n))
                        .collect::<Vec<_>>()),
                ));
            }
            let witnesses = report
                .excluded
                .iter()
                .map(|ex| {
                    obj(vec![
                        ("node", Value::Str(print_node(&store, ex.node))),
                        ("witness", Value::Str(print_node(&store, ex.witness))),
                    ])
                })
                .collect();
            Ok(Outcome {
                result: obj(pairs),
                witnesses,
                check_failed: false,
            })
        }
        CommandSpec::LevyProbe { k } => {
            let (_store, _segment, report) = levy_sequence_probe(*k)?;
            let ok = report.in_core && report.moduli_strictly_increase;
            Ok(Outcome {
                result: obj(vec![
                    ("k", Value::Int(report.k as i64)),
                    ("stabiliser_modulus", Value::Int(report.stabiliser_modulus as i64)),
                    (
                        "prefix_moduli",
                        Value::List(
                            report
                                .prefix_moduli
                                .iter()
                                .map(|&(i, m)| ints([i as usize, m as usize]))
                                .collect(),
                        ),
                    ),
                    ("in_core", Value::Bool(report.in_core)),
                    (
                        "closure_nodes_checked",
                        Value::Int(report.closure_nodes_checked as i64),
                    ),
                    (
                        "moduli_strictly_increase",
                        Value::Bool(report.moduli_strictly_increase),
                    ),
                ]),
                witnesses: vec![],
                check_failed: !ok,
            })
        }
        CommandSpec::GodelCheck => {
            let act = load_action(job.input("action")?)?;
            let spec = load_universe_spec(job.input("universe")?)?;
            let (mut store, u) = spec.build(job.caps.node_cap)?;
            let nodes: Vec<crate::hf::NodeId> = match job.input_opt("topology") {
                Some(tinput) => {
                    let tau = load_topology(tinput, act.monoid())?;
                    let mut oracle = FiniteStabOracle::new(&store, &act, &tau)?;
                    symmetric_core(&mut store, &u, &mut oracle)?.members
                }
                None => u.top().to_vec(),
            };
            let report = godel_closure_check(&mut store, &act, &nodes, u.rank_bound() as u32)?;
            let monoid = act.monoid();
            let witnesses: Vec<Value> = report
                .failures
                .iter()
                .map(|f| {
                    let mut pairs = vec![
                        ("op", Value::Word(f.op.to_string())),
                        ("a", Value::Str(print_node(&store, f.a))),
                    ];
                    if let Some(b) = f.b {
                        pairs.push(("b", Value::Str(print_node(&store, b))));
                    }
                    pairs.push(("result", Value::Str(print_node(&store, f.result))));
                    pairs.push((
                        "pair",
                        strs(vec![
                            monoid.label(f.witness.0).to_string(),
                            monoid.label(f.witness.1).to_string(),
                        ]),
                    ));
                    obj(pairs)
                })
                .collect();
            Ok(Outcome {
                result: obj(vec![
                    ("nodes_checked", Value::Int(report.nodes_checked as i64)),
                    ("pairs_checked", Value::Int(report.pairs_checked as i64)),
                    (
                        "rank_overflow_skips",
                        Value::Int(report.rank_overflow_skips as i64),
                    ),
                    ("all_hold", Value::Bool(report.all_hold())),
                ]),
                check_failed: !report.all_hold(),
                witnesses,
            })
        }
        CommandSpec::PowderCheck => {
            let m = load_monoid(job.input("monoid")?)?;
            let tau = load_topology(job.input("topology")?, &m)?;
            let left = is_left_powder(&m, &tau);
            let right = is_right_powder(&m, &tau);
            let chiral = left.is_powder() && !right.is_powder();
            let ok = left.is_powder() && right.is_powder();
            let mut witnesses = Vec::new();
            if !left.is_powder() {
                witnesses.push(obj(vec![
                    ("side", Value::Word("left".into())),
                    ("verdict", verdict_value(&m, &left)),
                ]));
            }
            if !right.is_powder() {
                witnesses.push(obj(vec![
                    ("side", Value::Word("right".into())),
                    ("verdict", verdict_value(&m.opposite(), &right)),
                ]));
            }
            Ok(Outcome {
                result: obj(vec![
                    ("left_powder", Value::Bool(left.is_powder())),
                    ("right_powder", Value::Bool(right.is_powder())),
                    ("chiral", Value::Bool(chiral)),
                ]),
                witnesses,
                check_failed: !ok,
            })
        }
        CommandSpec::ChiralCriterion {
            window,
            probes,
            closed_image_levels,
        } => {
            if *window > job.caps.window_cap {
                return Err(CliError::WindowCap {
                    w: *window,
                    cap: job.caps.window_cap,
                });
            }
            let mw = WindowMonoid::new(*window)?;
            let a = match job.input_opt("map_a") {
                Some(i) => load_window_map(i, *window)?,
                None => mw.identity(),
            };
            let b = match job.input_opt("map_b") {
                Some(i) => load_window_map(i, *window)?,
                None => mw.clamped_doubling(),
            };
            let probe_list = match job.input_opt("probes") {
                Some(i) => load_probes(i)?,
                None => generate_probes(&mw, job.seed, *probes),
            };
            let outcome = chirality_criterion(&mw, &a, &b, &probe_list, job.caps.search_cap)?;
            let closed_image = if closed_image_levels.is_empty() {
                None
            } else {
                Some(closed_image_probe(
                    closed_image_levels,
                    WindowKind::AllMaps,
                    job.caps.search_cap,
                )?)
            };
            let mut result_pairs = vec![
                ("window", Value::Int(*window as i64)),
                ("map_a", Value::Str(a.to_string())),
                ("map_b", Value::Str(b.to_string())),
            ];
            let (witnesses, check_failed) = match outcome {
                CriterionOutcome::Certificate(cert) => {
                    let reverified = verify_certificate(&cert, job.caps.search_cap)?;
                    result_pairs.push(("condition1_holds", Value::Bool(true)));
                    result_pairs.push((
                        "condition1_candidates",
                        Value::Int(cert.condition1_candidates as i64),
                    ));
                    result_pairs.push(("probe_count", Value::Int(cert.witnesses.len() as i64)));
                    result_pairs.push(("reverified", Value::Bool(reverified)));
                    let ws = cert
                        .witnesses
                        .iter()
                        .map(|w| {
                            obj(vec![
                                ("xs", ints(w.probe.xs.iter().copied())),
                                ("vs", ints(w.probe.vs.iter().copied())),
                                ("q", ints(w.q.0.iter().copied())),
                                ("r", ints(w.r.0.iter().copied())),
                            ])
                        })
                        .collect();
                    (ws, !reverified)
                }
                CriterionOutcome::Condition1Refuted { r } => {
                    result_pairs.push(("condition1_holds", Value::Bool(false)));
                    (
                        vec![obj(vec![("solving_r", ints(r.0.iter().copied()))])],
                        true,
                    )
                }
                CriterionOutcome::Condition2Fails { probe } => {
                    result_pairs.push(("condition1_holds", Value::Bool(true)));
                    result_pairs.push(("condition2_holds", Value::Bool(false)));
                    (
                        vec![obj(vec![
                            ("unsatisfiable_probe_xs", ints(probe.xs.iter().copied())),
                            ("unsatisfiable_probe_vs", ints(probe.vs.iter().copied())),
                        ])],
                        true,
                    )
                }
            };
            if let Some(levels) = closed_image {
                let rendered: Vec<Value> = levels
                    .iter()
                    .map(|l| {
                        let mut pairs = vec![
                            ("window", Value::Int(l.window as i64)),
                            ("pair_absent", Value::Bool(l.pair_absent)),
                            (
                                "approximations",
                                Value::List(
                                    l.approximations
                                        .iter()
                                        .map(|&(t, ok)| {
                                            obj(vec![
                                                ("sub_window", Value::Int(t as i64)),
                                                ("approximated", Value::Bool(ok)),
                                            ])
                                        })
                                        .collect(),
                                ),
                            ),
                            (
                                "accumulation_pair",
                                Value::Bool(l.accumulation_pair.is_some()),
                            ),
                        ];
                        if let (Some(img), Some(all)) = (l.image_pairs, l.all_pairs) {
                            pairs.push(("image_pairs", Value::Int(img as i64)));
                            pairs.push(("all_pairs", Value::Int(all as i64)));
                        }
                        obj(pairs)
                    })
                    .collect();
                result_pairs.push(("closed_image", Value::List(rendered)));
            }
            Ok(Outcome {
                result: obj(result_pairs),
                witnesses,
                check_failed,
            })
        }
        CommandSpec::CompleteCheck => {
            let m = load_monoid(job.input("monoid")?)?;
            let tau = load_topology(job.input("topology")?, &m)?;
            let report = is_left_complete(&m, &tau)?;
            let witnesses = match report.non_injective_witness {
                Some((x, y)) => vec![obj(vec![(
                    "collapsed_pair",
                    strs(vec![m.label(x).to_string(), m.label(y).to_string()]),
                )])],
                None => vec![],
            };
            Ok(Outcome {
                result: obj(vec![
                    ("r0_blocks", Value::Int(report.r0.num_blocks() as i64)),
                    ("limit_size", Value::Int(report.limit_size as i64)),
                    ("injective", Value::Bool(report.injective)),
                    ("surjective", Value::Bool(report.surjective)),
                    ("topology_matches", Value::Bool(report.topology_matches)),
                    ("complete", Value::Bool(report.complete())),
                    ("diagnosis", Value::Str(report.diagnosis())),
                ]),
                check_failed: !report.complete(),
                witnesses,
            })
        }
        CommandSpec::Eval { formula, assigns } => {
            let spec = load_universe_spec(job.input("universe")?)?;
            let (mut store, u) = spec.build(job.caps.node_cap)?;
            let f = parse_formula(&mut store, formula)?;
            let mut assignment = HashMap::new();
            for (var, term) in assigns {
                let node = parse_node(&mut store, term)?;
                assignment.insert(var.clone(), node);
            }
            let value = eval(&store, &u, &f, &assignment)?;
            Ok(Outcome::ok(obj(vec![
                ("formula", Value::Str(print_formula(&store, &f))),
                ("class", Value::Word(classify(&f).to_string())),
                ("value", Value::Bool(value)),
            ])))
        }
        CommandSpec::Elementarity {
            map,
            check,
            rank,
            samples,
        } => {
            let mut store = Store::pure();
            let u = crate::hf::build_universe(&mut store, *rank, job.caps.node_cap)?;
            let family = match check.as_str() {
                "atomic" => atomic_family(),
                "delta0" => delta0_family(),
                other => {
                    return Err(CliError::schema(
                        "check",
                        format!("unknown family `{other}` (atomic|delta0)"),
                    ))
                }
            };
            let formulas: Vec<crate::logic::Formula> =
                family.iter().map(|(_, f)| f.clone()).collect();
            let (mut emb, codomain) = match map.as_str() {
                "identity" => (Embedding::Identity, Some(&u)),
                "hamkins" => (Embedding::hamkins(), None),
                other => {
                    return Err(CliError::schema(
                        "map",
                        format!("unknown map `{other}` (identity|hamkins)"),
                    ))
                }
            };
            let strategy = match samples {
                Some(n) => ParamStrategy::Sampled {
                    seed: job.seed,
                    samples: *n,
                },
                None => ParamStrategy::Exhaustive {
                    cap: job.caps.search_cap,
                },
            };
            let report =
                check_preserves_reflects(&mut store, &mut emb, &formulas, &u, codomain, &strategy)?;
            let witnesses = match &report.failure {
                Some(fail) => vec![obj(vec![
                    (
                        "formula_name",
                        Value::Str(family[fail.formula_index].0.clone()),
                    ),
                    ("formula", Value::Str(print_formula(&store, &fail.formula))),
                    (
                        "params",
                        Value::List(
                            fail.params
                                .iter()
                                .map(|(v, n)| {
                                    obj(vec![
                                        ("var", Value::Str(v.clone())),
                                        ("node", Value::Str(print_node(&store, *n))),
                                    ])
                                })
                                .collect(),
                        ),
                    ),
                    ("holds_in_domain", Value::Bool(fail.holds_in_domain)),
                    ("holds_in_codomain", Value::Bool(fail.holds_in_codomain)),
                ])],
                None => vec![],
            };
            let mut pairs = vec![
                ("map", Value::Str(map.clone())),
                ("family", Value::Str(check.clone())),
                ("rank", Value::Int(*rank as i64)),
                ("formulas_checked", Value::Int(report.formulas_checked as i64)),
                ("tuples_checked", Value::Int(report.tuples_checked as i64)),
                ("passed", Value::Bool(report.passed())),
            ];
            if let Some(seed) = report.seed {
                pairs.push(("sample_seed", Value::Int(seed as i64)));
            }
            Ok(Outcome {
                result: obj(pairs),
                check_failed: !report.passed(),
                witnesses,
            })
        }
        CommandSpec::Hamkins { check, rank } => {
            let mut store = Store::pure();
            let u = crate::hf::build_universe(&mut store, *rank, job.caps.node_cap)?;
            let mut j = HamkinsMap::new();
            let tops = u.top().to_vec();
            match check.as_str() {
                "atomic" | "delta0" => {
                    let job2 = Job {
                        command: CommandSpec::Elementarity {
                            map: "hamkins".into(),
                            check: check.clone(),
                            rank: *rank,
                            samples: None,
                        },
                        inputs: vec![],
                        seed: job.seed,
                        caps: job.caps,
                    };
                    execute(&job2)
                }
                "injective" => {
                    let mut images = Vec::new();
                    for &x in &tops {
                        images.push(j.apply(&mut store, x)?);
                    }
                    let mut collision = None;
                    'outer: for (i, &jx) in images.iter().enumerate() {
                        for (k, &jy) in images.iter().enumerate().skip(i + 1) {
                            if jx == jy {
                                collision = Some((tops[i], tops[k]));
                                break 'outer;
                            }
                        }
                    }
                    let witnesses = collision
                        .map(|(x, y)| {
                            vec![obj(vec![
                                ("x", Value::Str(print_node(&store, x))),
                                ("y", Value::Str(print_node(&store, y))),
                            ])]
                        })
                        .unwrap_or_default();
                    Ok(Outcome {
                        result: obj(vec![
                            ("rank", Value::Int(*rank as i64)),
                            ("nodes", Value::Int(tops.len() as i64)),
                            ("injective", Value::Bool(collision.is_none())),
                        ]),
                        check_failed: collision.is_some(),
                        witnesses,
                    })
                }
                "fixpoints" => {
                    let mut fixed = None;
                    for &x in &tops {
                        if j.apply(&mut store, x)? == x {
                            fixed = Some(x);
                            break;
                        }
                    }
                    let witnesses = fixed
                        .map(|x| vec![obj(vec![("fixed_point", Value::Str(print_node(&store, x)))])])
                        .unwrap_or_default();
                    Ok(Outcome {
                        result: obj(vec![
                            ("rank", Value::Int(*rank as i64)),
                            ("nodes", Value::Int(tops.len() as i64)),
                            ("moves_every_point", Value::Bool(fixed.is_none())),
                        ]),
                        check_failed: fixed.is_some(),
                        witnesses,
                    })
                }
                "membership" => {
                    let mut counterexample = None;
                    'pairs: for &x in &tops {
                        for &y in &tops {
                            let jx = j.apply(&mut store, x)?;
                            let jy = j.apply(&mut store, y)?;
                            if store.has_member(y, x) != store.has_member(jy, jx) {
                                counterexample = Some((x, y));
                                break 'pairs;
                            }
                        }
                    }
                    let witnesses = counterexample
                        .map(|(x, y)| {
                            vec![obj(vec![
                                ("x", Value::Str(print_node(&store, x))),
                                ("y", Value::Str(print_node(&store, y))),
                            ])]
                        })
                        .unwrap_or_default();
                    Ok(Outcome {
                        result: obj(vec![
                            ("rank", Value::Int(*rank as i64)),
                            ("pairs", Value::Int((tops.len() * tops.len()) as i64)),
                            (
                                "membership_preserved_reflected",
                                Value::Bool(counterexample.is_none()),
                            ),
                        ]),
                        check_failed: counterexample.is_some(),
                        witnesses,
                    })
                }
                other => Err(CliError::schema(
                    "check",
                    format!("unknown check `{other}` (atomic|delta0|injective|fixpoints|membership)"),
                )),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// clap front end
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "powderset",
    version,
    about = "Finite-scale checks for monoid actions on hereditarily finite set universes"
)]
struct Cli {
    /// Write the report here instead of stdout (atomic rename).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for sampled strategies and probe generation; echoed in reports.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Universe node ceiling.
    #[arg(long, global = true, default_value_t = crate::hf::DEFAULT_NODE_CAP)]
    node_cap: u64,
    /// Exhaustive search ceiling (candidate maps, parameter tuples).
    #[arg(long, global = true, default_value_t = crate::powder::DEFAULT_SEARCH_CAP)]
    search_cap: u64,
    /// Largest window admitted for exhaustive window-map searches.
    #[arg(long, global = true, default_value_t = 8)]
    window_cap: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the strata of a universe and report their sizes.
    UniverseBuild {
        #[arg(long)]
        universe: String,
    },
    /// Extend an atom action to a universe.
    ActionExtend {
        #[arg(long)]
        action: String,
        #[arg(long)]
        universe: String,
    },
    /// Stabiliser relation of a carrier point or universe node.
    Stab {
        #[arg(long)]
        action: String,
        #[arg(long)]
        universe: Option<String>,
        #[arg(long)]
        point: String,
    },
    /// Symmetric core of a universe under a topologised action, or under the
    /// symbolic ℤ shift on orbit atoms.
    Core {
        #[arg(long, required_unless_present = "z", conflicts_with = "z")]
        action: Option<String>,
        #[arg(long)]
        universe: String,
        #[arg(long, required_unless_present = "z", conflicts_with = "z")]
        topology: Option<String>,
        /// Use the symbolic ℤ oracle (dℤ open for d >= 1) instead of an
        /// action and topology; the universe must use orbit atoms.
        #[arg(long)]
        z: bool,
    },
    /// Choice-sequence stabiliser probe over orbits with moduli 1..=k.
    LevyProbe {
        #[arg(long)]
        k: u64,
    },
    /// Stabiliser inclusions for union, pair, difference and product.
    GodelCheck {
        #[arg(long)]
        action: String,
        #[arg(long)]
        universe: String,
        /// Restrict the sweep to the symmetric core of this topology.
        #[arg(long)]
        topology: Option<String>,
    },
    /// Left/right powder verdicts and chirality for a finite monoid.
    PowderCheck {
        #[arg(long)]
        monoid: String,
        #[arg(long)]
        topology: String,
    },
    /// Chirality criterion on the window-truncated function monoid.
    ChiralCriterion {
        #[arg(long)]
        window: usize,
        /// Condition-2 probes to generate when no probe document is given.
        #[arg(long, default_value_t = 20)]
        probes: usize,
        #[arg(long)]
        probes_doc: Option<String>,
        #[arg(long)]
        map_a: Option<String>,
        #[arg(long)]
        map_b: Option<String>,
        /// Also run the closed-image probe along these window sizes.
        #[arg(long, value_delimiter = ',')]
        closed_image_levels: Vec<usize>,
    },
    /// Inverse-limit completeness of a topologised monoid.
    CompleteCheck {
        #[arg(long)]
        monoid: String,
        #[arg(long)]
        topology: String,
    },
    /// Evaluate a formula over a universe.
    Eval {
        #[arg(long)]
        universe: String,
        #[arg(long)]
        formula: String,
        /// Variable assignment `var=term`, repeatable.
        #[arg(long = "assign")]
        assigns: Vec<String>,
    },
    /// Preservation/reflection of a formula family under a structure map.
    Elementarity {
        #[arg(long)]
        map: String,
        #[arg(long)]
        check: String,
        #[arg(long)]
        rank: usize,
        /// Switch to the seeded sampled strategy with this many tuples.
        #[arg(long)]
        samples: Option<u32>,
    },
    /// Checks specific to the recursive self-embedding of the pure universe.
    Hamkins {
        #[arg(long)]
        check: String,
        #[arg(long)]
        rank: usize,
    },
    /// Re-run a report's job from its embedded inputs and compare.
    Verify {
        #[arg(long)]
        report: PathBuf,
    },
}

fn build_job(cli: &Cli) -> Result<Option<(Job, Option<PathBuf>)>, CliError> {
    let caps = Caps {
        node_cap: cli.node_cap,
        search_cap: cli.search_cap,
        window_cap: cli.window_cap,
    };
    let mut inputs = Vec::new();
    let command = match &cli.cmd {
        Cmd::UniverseBuild { universe } => {
            inputs.push(resolve_input("universe", "universe", universe)?);
            CommandSpec::UniverseBuild
        }
        Cmd::ActionExtend { action, universe } => {
            inputs.push(resolve_input("action", "action", action)?);
            inputs.push(resolve_input("universe", "universe", universe)?);
            CommandSpec::ActionExtend
        }
        Cmd::Stab {
            action,
            universe,
            point,
        } => {
            inputs.push(resolve_input("action", "action", action)?);
            if let Some(u) = universe {
                inputs.push(resolve_input("universe", "universe", u)?);
            }
            CommandSpec::Stab {
                point: point.clone(),
            }
        }
        Cmd::Core {
            action,
            universe,
            topology,
            z,
        } => {
            if let Some(a) = action {
                inputs.push(resolve_input("action", "action", a)?);
            }
            inputs.push(resolve_input("universe", "universe", universe)?);
            if let Some(t) = topology {
                inputs.push(resolve_input("topology", "topology", t)?);
            }
            CommandSpec::Core { symbolic_z: *z }
        }
        Cmd::LevyProbe { k } => CommandSpec::LevyProbe { k: *k },
        Cmd::GodelCheck {
            action,
            universe,
            topology,
        } => {
            inputs.push(resolve_input("action", "action", action)?);
            inputs.push(resolve_input("universe", "universe", universe)?);
            if let Some(t) = topology {
                inputs.push(resolve_input("topology", "topology", t)?);
            }
            CommandSpec::GodelCheck
        }
        Cmd::PowderCheck { monoid, topology } => {
            inputs.push(resolve_input("monoid", "monoid", monoid)?);
            inputs.push(resolve_input("topology", "topology", topology)?);
            CommandSpec::PowderCheck
        }
        Cmd::ChiralCriterion {
            window,
            probes,
            probes_doc,
            map_a,
            map_b,
            closed_image_levels,
        } => {
            if let Some(m) = map_a {
                inputs.push(resolve_input("map_a", "map", m)?);
            }
            if let Some(m) = map_b {
                inputs.push(resolve_input("map_b", "map", m)?);
            }
            if let Some(p) = probes_doc {
                inputs.push(resolve_input("probes", "probes", p)?);
            }
            CommandSpec::ChiralCriterion {
                window: *window,
                probes: *probes,
                closed_image_levels: closed_image_levels.clone(),
            }
        }
        Cmd::CompleteCheck { monoid, topology } => {
            inputs.push(resolve_input("monoid", "monoid", monoid)?);
            inputs.push(resolve_input("topology", "topology", topology)?);
            CommandSpec::CompleteCheck
        }
        Cmd::Eval {
            universe,
            formula,
            assigns,
        } => {
            inputs.push(resolve_input("universe", "universe", universe)?);
            let assigns = assigns
                .iter()
                .map(|a| {
                    a.split_once('=')
                        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                        .ok_or_else(|| {
                            CliError::schema("assign", format!("`{a}` is not of the form var=term"))
                        })
                })
                .collect::<Result<Vec<_>, _>>()?;
            CommandSpec::Eval {
                formula: formula.clone(),
                assigns,
            }
        }
        Cmd::Elementarity {
            map,
            check,
            rank,
            samples,
        } => CommandSpec::Elementarity {
            map: map.clone(),
            check: check.clone(),
            rank: *rank,
            samples: *samples,
        },
        Cmd::Hamkins { check, rank } => CommandSpec::Hamkins {
            check: check.clone(),
            rank: *rank,
        },
        Cmd::Verify { .. } => return Ok(None),
    };
    Ok(Some((
        Job {
            command,
            inputs,
            seed: cli.seed,
            caps,
        },
        cli.out.clone(),
    )))
}

fn emit(out: &Option<PathBuf>, text: &str) -> i32 {
    match out {
        Some(path) => {
            if let Err(e) = write_atomic(path, text) {
                eprintln!("powderset: cannot write report: {e}");
                return 2;
            }
            0
        }
        None => {
            print!("{text}");
            0
        }
    }
}

fn run_verify(report_path: &PathBuf, out: &Option<PathBuf>) -> i32 {
    let text = match std::fs::read_to_string(report_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("powderset: cannot read report: {e}");
            return 2;
        }
    };
    let report = match parse_report(&text) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("powderset: bad report: {e}");
            return 2;
        }
    };
    let command = match CommandSpec::from_name_and_args(&report.command, &report.args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("powderset: bad report: {e}");
            return 2;
        }
    };
    let job = Job {
        command,
        inputs: report.inputs.clone(),
        seed: report.seed,
        caps: report.caps,
    };
    let outcome = match execute(&job) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("powderset: re-run failed: {e}");
            return 2;
        }
    };
    let matches = outcome.result == report.result
        && outcome.witnesses == report.witnesses
        && outcome.check_failed == report.check_failed;
    let verdict = obj(vec![
        ("format_version", Value::Int(super::FORMAT_VERSION)),
        ("verified_command", Value::Str(report.command.clone())),
        ("inputs_digest", Value::Str(super::report::inputs_digest(&report.inputs))),
        ("matches", Value::Bool(matches)),
    ]);
    let rendered = super::doc::render_document("verification", &verdict);
    let code = emit(out, &rendered);
    if code != 0 {
        code
    } else if matches {
        0
    } else {
        1
    }
}

/// Entry point: parse argv, run the job, emit the report. Returns the process
/// exit code (0 ok / 1 check failed / 2 input error).
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap renders its own help/version/error text
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Cmd::Verify { report } = &cli.cmd {
        return run_verify(report, &cli.out);
    }
    let started = std::time::Instant::now();
    let (job, out) = match build_job(&cli) {
        Ok(Some(pair)) => pair,
        Ok(None) => unreachable!("verify handled above"),
        Err(e) => {
            eprintln!("powderset: {e}");
            return 2;
        }
    };
    let outcome = match execute(&job) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("powderset: {e}");
            return 2;
        }
    };
    let report = Report {
        command: job.command.name().to_string(),
        args: job.command.to_args(),
        seed: job.seed,
        caps: job.caps,
        inputs: job.inputs.clone(),
        result: outcome.result.clone(),
        witnesses: outcome.witnesses.clone(),
        check_failed: outcome.check_failed,
    };
    let text = render_report(&report);
    let code = emit(&out, &text);
    eprintln!(
        "powderset: {} finished in {} ms",
        job.command.name(),
        started.elapsed().as_millis()
    );
    if code != 0 {
        code
    } else if outcome.check_failed {
        1
    } else {
        0
    }
}
