use std::sync::Arc;

use super::Model;
use crate::error::{Error, Result};
use crate::kernel::{Alphabet, Effect, Label, MonadKind, Morphism, StateSpace, System};

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse { line, reason: reason.into() }
}

fn is_silent(label: &str) -> bool {
    label == "i" || label == "tau"
}

struct Raw {
    first: usize,
    states: usize,
    edges: Vec<(usize, String, usize)>,
}

fn parse_number(s: &str, line: usize, what: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| parse_err(line, format!("expected {what}, found {:?}", s.trim())))
}

fn parse(bytes: &[u8]) -> Result<Raw> {
    let text = std::str::from_utf8(bytes).map_err(|e| parse_err(1, e.to_string()))?;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing des header"))?;
    let inner = header
        .strip_prefix("des")
        .map(str::trim_start)
        .and_then(|r| r.strip_prefix('('))
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| parse_err(hline, "header must read des (<first>, <transitions>, <states>)"))?;
    let fields: Vec<&str> = inner.split(',').collect();
    if fields.len() != 3 {
        return Err(parse_err(hline, "header needs three fields"));
    }
    let first = parse_number(fields[0], hline, "initial state")?;
    let declared = parse_number(fields[1], hline, "transition count")?;
    let states = parse_number(fields[2], hline, "state count")?;
    if first >= states.max(1) {
        return Err(parse_err(hline, "initial state out of range"));
    }
    let mut edges = Vec::with_capacity(declared);
    for (n, line) in lines {
        let inner = line
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| parse_err(n, "transition must be parenthesized"))?;
        let (from, rest) = inner.split_once(',').ok_or_else(|| parse_err(n, "missing label"))?;
        let (label, to) = rest.rsplit_once(',').ok_or_else(|| parse_err(n, "missing target"))?;
        let from = parse_number(from, n, "source state")?;
        let to = parse_number(to, n, "target state")?;
        if from >= states || to >= states {
            return Err(parse_err(n, format!("state out of range 0..{states}")));
        }
        let label = label.trim();
        let label = match label.strip_prefix('"') {
            Some(r) => r.strip_suffix('"').ok_or_else(|| parse_err(n, "unterminated label"))?,
            None => label,
        };
        if label.is_empty() {
            return Err(parse_err(n, "empty label"));
        }
        edges.push((from, label.to_string(), to));
    }
    if edges.len() != declared {
        return Err(Error::HeaderMismatch { what: "transitions", declared, found: edges.len() });
    }
    Ok(Raw { first, states, edges })
}

fn build(raw: Raw, alphabet: Arc<Alphabet>) -> Result<Model> {
    let mut image = vec![Vec::new(); raw.states];
    for (from, label, to) in raw.edges {
        let l = if is_silent(&label) {
            Label::Silent
        } else {
            alphabet.label(&label).ok_or_else(|| Error::Invalid(format!("label {label:?} is not in the alphabet")))?
        };
        image[from].push((l, to));
    }
    let image = image.into_iter().map(Effect::lts).collect();
    let system = Morphism::system(MonadKind::Lts, alphabet, Arc::new(StateSpace::numbered(raw.states)), image)?;
    let initial = (raw.states > 0).then_some(raw.first);
    Ok(Model { system, initial })
}

/// Reads an Aldebaran file. States are named `0..n`; the alphabet is the set
/// of visible labels used, in byte order; `i` and `tau` are silent.
pub fn read_aut(bytes: &[u8]) -> Result<Model> {
    let raw = parse(bytes)?;
    let mut letters: Vec<String> = raw.edges.iter().map(|e| e.1.clone()).filter(|l| !is_silent(l)).collect();
    letters.sort();
    letters.dedup();
    let alphabet = Arc::new(Alphabet::new(letters, "tau")?);
    build(raw, alphabet)
}

/// Reads an Aldebaran file over a given alphabet; labels outside it are rejected.
pub fn read_aut_in(bytes: &[u8], alphabet: &Arc<Alphabet>) -> Result<Model> {
    build(parse(bytes)?, alphabet.clone())
}

/// Writes an LTS in Aldebaran format: states by carrier index, labels
/// quoted, the silent label as `tau`.
pub fn write_aut(system: &System, initial: Option<usize>) -> Result<String> {
    system.expect_kind("write_aut", &[MonadKind::Lts])?;
    let alphabet = system.alphabet();
    if let Some(bad) = alphabet.visible().iter().find(|l| is_silent(l) || l.contains('"')) {
        return Err(Error::Invalid(format!("label {bad:?} cannot be written to .aut")));
    }
    let mut out = format!("des ({}, {}, {})\n", initial.unwrap_or(0), system.edge_count(), system.len());
    for (x, e) in system.image().iter().enumerate() {
        let Effect::Lts(pairs) = e else { unreachable!() };
        for &(l, y) in pairs {
            let name = match l {
                Label::Silent => "tau",
                Label::Visible(_) => alphabet.label_name(l),
            };
            out.push_str(&format!("({x}, \"{name}\", {y})\n"));
        }
    }
    Ok(out)
}
