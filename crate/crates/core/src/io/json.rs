use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::Model;
use crate::equivalence::Partition;
use crate::error::{Error, Result};
use crate::kernel::{Alphabet, Effect, Label, MonadKind, Morphism, StateSpace, System, Word};
use crate::saturation::{sample_words, WeakMatrix};
use crate::trace::TraceMap;

// Field order is alphabetical so that serialized keys come out sorted.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    alphabet: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    exits: Vec<ExitDoc>,
    #[serde(default, rename = "final", skip_serializing_if = "Vec::is_empty")]
    finals: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    initial: Option<String>,
    kind: MonadKind,
    #[serde(default = "default_silent")]
    silent: String,
    states: Vec<String>,
    transitions: Vec<TransitionDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionDoc {
    from: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    word: Option<Vec<String>>,
}

/// A non-empty accepted bare word of an ε-NA state.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExitDoc {
    state: String,
    word: Vec<String>,
}

fn default_silent() -> String {
    "tau".to_string()
}

fn schema(path: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Schema { path: path.into(), reason: reason.into() }
}

fn from_serde(e: serde_json::Error) -> Error {
    use serde_json::error::Category;
    match e.classify() {
        Category::Data => schema("$", e.to_string()),
        _ => Error::Parse { line: e.line(), reason: e.to_string() },
    }
}

/// Parses a model document.
pub fn read_json(bytes: &[u8]) -> Result<Model> {
    let doc: Document = serde_json::from_slice(bytes).map_err(from_serde)?;
    from_document(doc)
}

/// Reads a model document from an already parsed JSON value.
pub fn from_value(value: &Value) -> Result<Model> {
    let doc = Document::deserialize(value).map_err(|e| schema("$", e.to_string()))?;
    from_document(doc)
}

/// Canonical serialization: sorted keys, states in carrier order,
/// transitions by source state then effect order, newline-terminated.
pub fn write_json(system: &System, initial: Option<usize>) -> String {
    let mut s = serde_json::to_string_pretty(&to_document(system, initial)).expect("documents serialize");
    s.push('\n');
    s
}

pub fn to_value(system: &System, initial: Option<usize>) -> Value {
    serde_json::to_value(to_document(system, initial)).expect("documents serialize")
}

/// Pretty, newline-terminated rendering of any JSON value.
pub fn write_value(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

fn word_names(alphabet: &Alphabet, w: &Word) -> Vec<String> {
    w.letters().iter().map(|&a| alphabet.letter_name(a).to_string()).collect()
}

fn to_document(system: &System, initial: Option<usize>) -> Document {
    let alphabet = system.alphabet();
    let space = system.source();
    let name = |x: usize| space.name(x).to_string();
    let mut transitions = Vec::new();
    let mut finals = Vec::new();
    let mut exits = Vec::new();
    let word_transition = |from: usize, w: &Word, to: usize| match w.letters() {
        [] => TransitionDoc { from: name(from), label: Some(alphabet.silent().to_string()), to: name(to), word: None },
        [a] => TransitionDoc { from: name(from), label: Some(alphabet.letter_name(*a).to_string()), to: name(to), word: None },
        _ => TransitionDoc { from: name(from), label: None, to: name(to), word: Some(word_names(alphabet, w)) },
    };
    for (x, e) in system.image().iter().enumerate() {
        match e {
            Effect::Pow(ys) => {
                transitions.extend(ys.iter().map(|&y| TransitionDoc { from: name(x), label: None, to: name(y), word: None }))
            }
            Effect::Lts(pairs) => transitions.extend(pairs.iter().map(|&(l, y)| TransitionDoc {
                from: name(x),
                label: Some(alphabet.label_name(l).to_string()),
                to: name(y),
                word: None,
            })),
            Effect::FreeLts(pairs) => transitions.extend(pairs.iter().map(|(w, y)| word_transition(x, w, *y))),
            Effect::Ena { pairs, bare } => {
                transitions.extend(pairs.iter().map(|(w, y)| word_transition(x, w, *y)));
                for w in bare {
                    if w.is_empty() {
                        finals.push(name(x));
                    } else {
                        exits.push(ExitDoc { state: name(x), word: word_names(alphabet, w) });
                    }
                }
            }
        }
    }
    Document {
        alphabet: alphabet.visible().to_vec(),
        exits,
        finals,
        initial: initial.map(name),
        kind: system.kind(),
        silent: alphabet.silent().to_string(),
        states: space.names().to_vec(),
        transitions,
    }
}

fn from_document(doc: Document) -> Result<Model> {
    let space = Arc::new(StateSpace::new(doc.states.iter().cloned()).map_err(|e| schema("states", e.to_string()))?);
    let alphabet =
        Arc::new(Alphabet::new(doc.alphabet.iter().cloned(), doc.silent.clone()).map_err(|e| schema("alphabet", e.to_string()))?);
    let kind = doc.kind;
    let state = |path: String, name: &str| space.lookup(name).map_err(|_| schema(path, format!("undeclared state {name:?}")));
    let letters = |path: String, names: &[String]| -> Result<Word> {
        names
            .iter()
            .map(|n| alphabet.letter(n).ok_or_else(|| schema(path.clone(), format!("{n:?} is not a visible letter"))))
            .collect()
    };

    let mut pow: Vec<Vec<usize>> = vec![Vec::new(); space.len()];
    let mut lts: Vec<Vec<(Label, usize)>> = vec![Vec::new(); space.len()];
    let mut words: Vec<Vec<(Word, usize)>> = vec![Vec::new(); space.len()];
    let mut bare: Vec<Vec<Word>> = vec![Vec::new(); space.len()];
    let mut seen = HashSet::new();
    for (i, t) in doc.transitions.iter().enumerate() {
        let path = |field: &str| format!("transitions[{i}].{field}");
        let from = state(path("from"), &t.from)?;
        let to = state(path("to"), &t.to)?;
        match kind {
            MonadKind::Pow => {
                if t.label.is_some() || t.word.is_some() {
                    return Err(schema(path("label"), "pow transitions carry no label"));
                }
                pow[from].push(to);
            }
            MonadKind::Lts => {
                if t.word.is_some() {
                    return Err(schema(path("word"), "lts transitions use label"));
                }
                let l = t.label.as_deref().ok_or_else(|| schema(path("label"), "missing label"))?;
                let l = alphabet.label(l).ok_or_else(|| schema(path("label"), format!("unknown label {l:?}")))?;
                lts[from].push((l, to));
            }
            MonadKind::FreeLts | MonadKind::Ena => {
                let w = match (&t.label, &t.word) {
                    (Some(l), None) => match alphabet.label(l) {
                        Some(Label::Silent) => Word::empty(),
                        Some(Label::Visible(a)) => Word::letter(a),
                        None => return Err(schema(path("label"), format!("unknown label {l:?}"))),
                    },
                    (None, Some(ws)) => letters(path("word"), ws)?,
                    _ => return Err(schema(format!("transitions[{i}]"), "exactly one of label and word is required")),
                };
                words[from].push((w, to));
            }
        }
        let key = (from, to, t.label.clone(), t.word.clone());
        if !seen.insert(key) {
            return Err(schema(format!("transitions[{i}]"), "duplicate transition"));
        }
    }
    if kind != MonadKind::Ena && (!doc.finals.is_empty() || !doc.exits.is_empty()) {
        return Err(schema("final", format!("{kind} documents have no final states")));
    }
    for (i, f) in doc.finals.iter().enumerate() {
        let x = state(format!("final[{i}]"), f)?;
        if bare[x].contains(&Word::empty()) {
            return Err(schema(format!("final[{i}]"), "duplicate final state"));
        }
        bare[x].push(Word::empty());
    }
    for (i, e) in doc.exits.iter().enumerate() {
        let x = state(format!("exits[{i}].state"), &e.state)?;
        let w = letters(format!("exits[{i}].word"), &e.word)?;
        if w.is_empty() {
            return Err(schema(format!("exits[{i}].word"), "use final for the empty word"));
        }
        bare[x].push(w);
    }
    let image: Vec<Effect> = match kind {
        MonadKind::Pow => pow.into_iter().map(Effect::pow).collect(),
        MonadKind::Lts => lts.into_iter().map(Effect::lts).collect(),
        MonadKind::FreeLts => words.into_iter().map(Effect::free_lts).collect(),
        MonadKind::Ena => words.into_iter().zip(bare).map(|(p, b)| Effect::ena(p, b)).collect(),
    };
    // Distinct documents entries may still collapse (label "tau" vs word []).
    let declared = doc.transitions.len() + doc.finals.len() + doc.exits.len();
    if image.iter().map(Effect::size).sum::<usize>() != declared {
        return Err(schema("transitions", "duplicate transition"));
    }
    let initial = doc.initial.as_deref().map(|n| state("initial".into(), n)).transpose()?;
    let system = Morphism::system(kind, alphabet, space, image)?;
    Ok(Model { system, initial })
}

/// `{"blocks": [[names...], ...]}` in canonical block order.
pub fn partition_value(partition: &Partition) -> Value {
    let space = partition.space();
    let blocks: Vec<Vec<&str>> =
        partition.blocks().iter().map(|b| b.iter().map(|&x| space.name(x)).collect()).collect();
    json!({ "blocks": blocks })
}

/// Bounded trace table as `{state: [words...]}`; words sorted bytewise on
/// their rendering. `None` for exact maps.
pub fn trace_table_value(trace: &TraceMap) -> Option<Value> {
    let rows = trace.table()?;
    let map: serde_json::Map<String, Value> = rows.into_iter().map(|(k, ws)| (k, json!(ws))).collect();
    Some(Value::Object(map))
}

/// A finite description of a symbolic saturation: for every nonempty entry,
/// the size of its minimal DFA and its shortest words.
pub fn matrix_summary(matrix: &WeakMatrix, max_len: usize, samples: usize) -> Value {
    let space = matrix.space();
    let alphabet = matrix.alphabet();
    let describe = |l: &crate::reglang::RegLang| {
        let words: Vec<String> = sample_words(l, max_len, samples).iter().map(|w| alphabet.render(w)).collect();
        (l.minimal_dfa().len(), words)
    };
    let mut entries = Vec::new();
    let mut bare = Vec::new();
    for x in 0..matrix.len() {
        for y in 0..matrix.len() {
            let l = matrix.lang(x, y);
            if l.is_empty() {
                continue;
            }
            let (size, words) = describe(&l);
            entries.push(json!({ "from": space.name(x), "to": space.name(y), "dfa_states": size, "samples": words }));
        }
        if let Some(l) = matrix.bare(x) {
            if !l.is_empty() {
                let (size, words) = describe(&l);
                bare.push(json!({ "state": space.name(x), "dfa_states": size, "samples": words }));
            }
        }
    }
    let mut v = json!({ "states": space.names(), "entries": entries });
    if matrix.has_bare() {
        v["accepting"] = json!(bare);
    }
    v
}
