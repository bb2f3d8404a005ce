//! Input resolution and typed loaders for the document formats.
//!
//! A flag value is resolved to a document in this order: inline text when it
//! contains a brace or whitespace, an existing file path otherwise, and
//! finally a builtin name. Builtins are rendered to canonical documents, so
//! the digest covers them like any other input.

use std::collections::HashMap;

use super::doc::{ints, obj, parse_document, render_document, strs, Value};
use super::CliError;
use crate::action::ActionTable;
use crate::hf::{AtomTable, Store, Universe};
use crate::monoid::{FinMonoid, LeftCongruence, MonoidTopology};
use crate::powder::WindowMap;

/// One resolved input document: where it came from and its exact text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedInput {
    pub name: String,
    pub source: String,
    pub text: String,
}

impl NamedInput {
    pub fn parsed(&self) -> Result<(String, Value), CliError> {
        Ok(parse_document(&self.text)?)
    }
}

/// Resolve a raw flag value into a named input document.
pub fn resolve_input(name: &str, kind: &'static str, raw: &str) -> Result<NamedInput, CliError> {
    if raw.contains('{') || raw.contains(char::is_whitespace) {
        return Ok(NamedInput {
            name: name.to_string(),
            source: "inline".to_string(),
            text: raw.to_string(),
        });
    }
    let path = std::path::Path::new(raw);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: raw.to_string(),
            source,
        })?;
        return Ok(NamedInput {
            name: name.to_string(),
            source: format!("file:{raw}"),
            text,
        });
    }
    let text = builtin_text(kind, raw)?;
    Ok(NamedInput {
        name: name.to_string(),
        source: format!("builtin:{raw}"),
        text,
    })
}

fn builtin_text(kind: &'static str, name: &str) -> Result<String, CliError> {
    let value = match kind {
        "monoid" => builtin_monoid(name).map(|m| monoid_to_value(&m)),
        "action" => builtin_action(name).map(|a| action_to_value(&a)),
        "topology" => match name {
            "discrete" | "indiscrete" => Some(obj(vec![("kind", Value::Word(name.into()))])),
            _ => None,
        },
        "map" => match name {
            "identity" | "double-clamp" => Some(obj(vec![("kind", Value::Word(name.into()))])),
            _ => None,
        },
        _ => None,
    };
    value
        .map(|v| render_document(kind, &v))
        .ok_or(CliError::UnknownBuiltin {
            kind,
            name: name.to_string(),
        })
}

pub fn builtin_monoid(name: &str) -> Option<FinMonoid> {
    Some(match name {
        "trivial" => FinMonoid::trivial(),
        "m2" => FinMonoid::m2(),
        "z2" => FinMonoid::cyclic(2),
        "z3" => FinMonoid::cyclic(3),
        "z4" => FinMonoid::cyclic(4),
        "z6" => FinMonoid::cyclic(6),
        "lz3" => FinMonoid::lz3(),
        "t2" => FinMonoid::full_transformation(2),
        _ => return None,
    })
}

pub fn builtin_action(name: &str) -> Option<ActionTable> {
    let two = || vec!["a".to_string(), "b".to_string()];
    Some(match name {
        "swap" => ActionTable::new(FinMonoid::cyclic(2), two(), vec![vec![0, 1], vec![1, 0]])
            .expect("swap is lawful"),
        "collapse" => ActionTable::new(FinMonoid::m2(), two(), vec![vec![0, 1], vec![0, 0]])
            .expect("collapse is lawful"),
        "trivial2" => ActionTable::trivial(FinMonoid::trivial(), two()),
        "cycle3" => ActionTable::new(
            FinMonoid::cyclic(3),
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
        )
        .expect("cycle3 is lawful"),
        _ => return None,
    })
}

fn expect_tag(input: &NamedInput, want: &str) -> Result<Value, CliError> {
    let (tag, value) = input.parsed()?;
    if tag != want {
        return Err(CliError::schema(
            &input.name,
            format!("expected a `{want}` document, found `{tag}`"),
        ));
    }
    Ok(value)
}

fn field<'a>(input: &NamedInput, v: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    v.field(key)
        .ok_or_else(|| CliError::schema(&input.name, format!("missing field `{key}`")))
}

fn usize_list(input: &NamedInput, v: &Value, what: &str) -> Result<Vec<usize>, CliError> {
    v.as_list()
        .ok_or_else(|| CliError::schema(&input.name, format!("{what} must be a list")))?
        .iter()
        .map(|x| {
            x.as_usize()
                .ok_or_else(|| CliError::schema(&input.name, format!("{what} entries must be non-negative integers")))
        })
        .collect()
}

pub fn load_monoid(input: &NamedInput) -> Result<FinMonoid, CliError> {
    let v = expect_tag(input, "monoid")?;
    monoid_from_value(input, &v)
}

fn monoid_from_value(input: &NamedInput, v: &Value) -> Result<FinMonoid, CliError> {
    let table: Vec<Vec<usize>> = field(input, v, "table")?
        .as_list()
        .ok_or_else(|| CliError::schema(&input.name, "`table` must be a list of rows"))?
        .iter()
        .map(|row| usize_list(input, row, "table row"))
        .collect::<Result<_, _>>()?;
    let labels: Vec<String> = match v.field("elements") {
        Some(l) => l
            .as_list()
            .ok_or_else(|| CliError::schema(&input.name, "`elements` must be a list"))?
            .iter()
            .map(|e| {
                e.as_text()
                    .map(str::to_string)
                    .ok_or_else(|| CliError::schema(&input.name, "`elements` entries must be strings"))
            })
            .collect::<Result<_, _>>()?,
        None => Vec::new(),
    };
    let identity = match v.field("identity") {
        Some(i) => Some(i.as_usize().ok_or_else(|| {
            CliError::schema(&input.name, "`identity` must be a non-negative integer")
        })?),
        None => None,
    };
    Ok(FinMonoid::new(labels, table, identity)?)
}

pub fn monoid_to_value(m: &FinMonoid) -> Value {
    obj(vec![
        ("elements", strs(m.labels().to_vec())),
        (
            "table",
            Value::List(m.table_rows().into_iter().map(ints).collect()),
        ),
        ("identity", Value::Int(m.identity() as i64)),
    ])
}

pub fn load_action(input: &NamedInput) -> Result<ActionTable, CliError> {
    let v = expect_tag(input, "action")?;
    let monoid = match field(input, &v, "monoid")? {
        Value::Word(w) | Value::Str(w) => builtin_monoid(w).ok_or(CliError::UnknownBuiltin {
            kind: "monoid",
            name: w.clone(),
        })?,
        inline @ Value::Object(_) => monoid_from_value(input, inline)?,
        _ => {
            return Err(CliError::schema(
                &input.name,
                "`monoid` must be a builtin name or an inline monoid object",
            ))
        }
    };
    let carrier: Vec<String> = field(input, &v, "carrier")?
        .as_list()
        .ok_or_else(|| CliError::schema(&input.name, "`carrier` must be a list"))?
        .iter()
        .map(|e| {
            e.as_text()
                .map(str::to_string)
                .ok_or_else(|| CliError::schema(&input.name, "`carrier` entries must be strings"))
        })
        .collect::<Result<_, _>>()?;
    let table_obj = field(input, &v, "table")?;
    let rows: HashMap<String, Vec<usize>> = match table_obj {
        Value::Object(pairs) => pairs
            .iter()
            .map(|(k, row)| Ok((k.clone(), usize_list(input, row, "action row")?)))
            .collect::<Result<_, CliError>>()?,
        _ => {
            return Err(CliError::schema(
                &input.name,
                "`table` must map element labels to rows",
            ))
        }
    };
    let mut table = Vec::with_capacity(monoid.size());
    for e in monoid.elements() {
        let label = monoid.label(e);
        let row = rows.get(label).ok_or_else(|| {
            CliError::schema(&input.name, format!("table misses a row for element `{label}`"))
        })?;
        table.push(row.clone());
    }
    Ok(ActionTable::new(monoid, carrier, table)?)
}

pub fn action_to_value(a: &ActionTable) -> Value {
    let rows: Vec<(String, Value)> = a
        .monoid()
        .elements()
        .map(|e| {
            (
                a.monoid().label(e).to_string(),
                ints((0..a.num_points()).map(|x| a.apply(e, x))),
            )
        })
        .collect();
    obj(vec![
        ("monoid", monoid_to_value(a.monoid())),
        ("carrier", strs(a.points().to_vec())),
        ("table", Value::Object(rows)),
    ])
}

/// Plain or ℤ-orbit universe description; builds a fresh store.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniverseSpec {
    pub atoms: AtomSpec,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtomSpec {
    Plain { labels: Vec<String> },
    Orbits { moduli: Vec<u64> },
}

impl UniverseSpec {
    pub fn build(&self, node_cap: u64) -> Result<(Store, Universe), CliError> {
        let table = match &self.atoms {
            AtomSpec::Plain { labels } => AtomTable::plain(labels.clone())?,
            AtomSpec::Orbits { moduli } => AtomTable::from_orbit_moduli(moduli)?,
        };
        let mut store = Store::new(table);
        let universe = crate::hf::build_universe(&mut store, self.rank, node_cap)?;
        Ok((store, universe))
    }
}

pub fn load_universe_spec(input: &NamedInput) -> Result<UniverseSpec, CliError> {
    let v = expect_tag(input, "universe")?;
    let rank = field(input, &v, "rank")?
        .as_usize()
        .ok_or_else(|| CliError::schema(&input.name, "`rank` must be a non-negative integer"))?;
    let atoms = if let Some(moduli) = v.field("moduli") {
        let moduli: Vec<u64> = moduli
            .as_list()
            .ok_or_else(|| CliError::schema(&input.name, "`moduli` must be a list"))?
            .iter()
            .map(|m| {
                m.as_int()
                    .and_then(|i| u64::try_from(i).ok())
                    .filter(|&i| i >= 1)
                    .ok_or_else(|| CliError::schema(&input.name, "`moduli` entries must be positive"))
            })
            .collect::<Result<_, _>>()?;
        if let Some(count) = v.field("atoms") {
            let expect: u64 = moduli.iter().sum();
            if count.as_int() != Some(expect as i64) {
                return Err(CliError::schema(
                    &input.name,
                    format!("`atoms` disagrees with the orbit expansion: moduli need {expect} atoms"),
                ));
            }
        }
        AtomSpec::Orbits { moduli }
    } else if let Some(labels) = v.field("labels") {
        let labels: Vec<String> = labels
            .as_list()
            .ok_or_else(|| CliError::schema(&input.name, "`labels` must be a list"))?
            .iter()
            .map(|l| {
                l.as_text()
                    .map(str::to_string)
                    .ok_or_else(|| CliError::schema(&input.name, "`labels` entries must be strings"))
            })
            .collect::<Result<_, _>>()?;
        AtomSpec::Plain { labels }
    } else {
        let count = field(input, &v, "atoms")?
            .as_usize()
            .ok_or_else(|| CliError::schema(&input.name, "`atoms` must be a non-negative integer"))?;
        AtomSpec::Plain {
            labels: AtomTable::with_count(count).labels().to_vec(),
        }
    };
    Ok(UniverseSpec { atoms, rank })
}

pub fn universe_to_value(spec: &UniverseSpec) -> Value {
    let mut pairs: Vec<(&str, Value)> = Vec::new();
    match &spec.atoms {
        AtomSpec::Plain { labels } => {
            pairs.push(("atoms", Value::Int(labels.len() as i64)));
            pairs.push(("labels", strs(labels.clone())));
        }
        AtomSpec::Orbits { moduli } => pairs.push((
            "moduli",
            Value::List(moduli.iter().map(|&m| Value::Int(m as i64)).collect()),
        )),
    }
    pairs.push(("rank", Value::Int(spec.rank as i64)));
    obj(pairs)
}

pub fn load_topology(input: &NamedInput, m: &FinMonoid) -> Result<MonoidTopology, CliError> {
    let v = expect_tag(input, "topology")?;
    let kind = field(input, &v, "kind")?
        .as_text()
        .ok_or_else(|| CliError::schema(&input.name, "`kind` must be a word"))?
        .to_string();
    match kind.as_str() {
        "discrete" => Ok(MonoidTopology::discrete(m.size())),
        "indiscrete" => Ok(MonoidTopology::indiscrete(m.size())),
        "filter" => {
            let gens = field(input, &v, "generators")?
                .as_list()
                .ok_or_else(|| CliError::schema(&input.name, "`generators` must be a list of partitions"))?;
            let mut seeds = Vec::with_capacity(gens.len());
            for g in gens {
                let classes: Vec<Vec<usize>> = g
                    .as_list()
                    .ok_or_else(|| CliError::schema(&input.name, "a partition is a list of blocks"))?
                    .iter()
                    .map(|b| usize_list(input, b, "block"))
                    .collect::<Result<_, _>>()?;
                seeds.push(LeftCongruence::from_classes(m, &classes)?);
            }
            let filter = crate::monoid::filter_close(m, &seeds);
            Ok(MonoidTopology::from_filter(&filter))
        }
        "basis" => {
            let sets: Vec<Vec<usize>> = field(input, &v, "basis")?
                .as_list()
                .ok_or_else(|| CliError::schema(&input.name, "`basis` must be a list of sets"))?
                .iter()
                .map(|s| usize_list(input, s, "basis set"))
                .collect::<Result<_, _>>()?;
            Ok(MonoidTopology::from_basis(m.size(), &sets)?)
        }
        other => Err(CliError::schema(
            &input.name,
            format!("unknown topology kind `{other}` (discrete|indiscrete|filter|basis)"),
        )),
    }
}

/// Window-map description resolved against a window size.
pub fn load_window_map(input: &NamedInput, w: usize) -> Result<WindowMap, CliError> {
    let v = expect_tag(input, "map")?;
    if let Some(kind) = v.field("kind") {
        let mw = crate::powder::WindowMonoid::new(w)?;
        return match kind.as_text() {
            Some("identity") => Ok(mw.identity()),
            Some("double-clamp") => Ok(mw.clamped_doubling()),
            other => Err(CliError::schema(
                &input.name,
                format!("unknown map kind `{other:?}` (identity|double-clamp)"),
            )),
        };
    }
    let values = usize_list(input, field(input, &v, "values")?, "`values`")?;
    Ok(WindowMap(values))
}

pub fn load_probes(input: &NamedInput) -> Result<Vec<crate::powder::Probe>, CliError> {
    let v = expect_tag(input, "probes")?;
    field(input, &v, "list")?
        .as_list()
        .ok_or_else(|| CliError::schema(&input.name, "`list` must be a list of probes"))?
        .iter()
        .map(|p| {
            let xs = usize_list(input, field(input, p, "xs")?, "`xs`")?;
            let vs = usize_list(input, field(input, p, "vs")?, "`vs`")?;
            Ok(crate::powder::Probe { xs, vs })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inline(name: &str, text: &str) -> NamedInput {
        NamedInput {
            name: name.into(),
            source: "inline".into(),
            text: text.into(),
        }
    }

    #[test]
    fn monoid_documents_round_trip() {
        for name in ["trivial", "m2", "z2", "z3", "z4", "z6", "lz3", "t2"] {
            let m = builtin_monoid(name).unwrap();
            let text = render_document("monoid", &monoid_to_value(&m));
            let loaded = load_monoid(&inline("monoid", &text)).unwrap();
            assert_eq!(loaded, m, "builtin {name}");
        }
    }

    #[test]
    fn action_documents_round_trip() {
        for name in ["swap", "collapse", "trivial2", "cycle3"] {
            let a = builtin_action(name).unwrap();
            let text = render_document("action", &action_to_value(&a));
            let loaded = load_action(&inline("action", &text)).unwrap();
            assert_eq!(loaded.points(), a.points());
            assert_eq!(loaded.monoid(), a.monoid());
            for e in a.monoid().elements() {
                for x in 0..a.num_points() {
                    assert_eq!(loaded.apply(e, x), a.apply(e, x));
                }
            }
        }
    }

    #[test]
    fn monoid_law_errors_surface() {
        let bad = inline(
            "monoid",
            "monoid {elements: [\"1\", \"a\", \"b\"], table: [[0,1,2],[1,2,1],[2,1,1]], identity: 0}",
        );
        match load_monoid(&bad) {
            Err(CliError::Monoid(crate::monoid::MonoidError::NonAssociative { .. })) => {}
            other => panic!("expected an associativity error, got {other:?}"),
        }
    }

    #[test]
    fn universe_specs() {
        let plain = load_universe_spec(&inline("universe", "universe {atoms: 2, rank: 2}")).unwrap();
        assert_eq!(plain.rank, 2);
        let (store, u) = plain.build(crate::hf::DEFAULT_NODE_CAP).unwrap();
        assert_eq!(store.atoms().count(), 2);
        assert_eq!(u.len(), 66);

        let orbits =
            load_universe_spec(&inline("universe", "universe {moduli: [1, 2, 3], rank: 1}")).unwrap();
        let (store, _) = orbits.build(crate::hf::DEFAULT_NODE_CAP).unwrap();
        assert_eq!(store.atoms().count(), 6);

        let text = render_document("universe", &universe_to_value(&orbits));
        assert_eq!(load_universe_spec(&inline("universe", &text)).unwrap(), orbits);

        assert!(load_universe_spec(&inline(
            "universe",
            "universe {atoms: 5, moduli: [1, 2], rank: 1}"
        ))
        .is_err());
    }

    #[test]
    fn topology_documents() {
        let m2 = FinMonoid::m2();
        let disc = load_topology(&inline("topology", "topology {kind: discrete}"), &m2).unwrap();
        assert!(disc.is_discrete());
        let filt = load_topology(
            &inline("topology", "topology {kind: filter, generators: [[[0, 1]]]}"),
            &m2,
        )
        .unwrap();
        assert!(!filt.is_t0());
        let basis = load_topology(
            &inline("topology", "topology {kind: basis, basis: [[0], [0, 1]]}"),
            &m2,
        )
        .unwrap();
        assert!(basis.is_t0() && !basis.is_discrete());
    }

    #[test]
    fn builtin_resolution() {
        let named = resolve_input("monoid", "monoid", "m2").unwrap();
        assert_eq!(named.source, "builtin:m2");
        assert!(named.text.starts_with("monoid {"));
        assert!(matches!(
            resolve_input("monoid", "monoid", "nope"),
            Err(CliError::UnknownBuiltin { .. })
        ));
    }
}
