//! Canonical text format for instances and results. One line-oriented
//! format covers all four instance kinds so that reductions chain naturally
//! through pipes. `#` starts a comment; blank lines are ignored.
//!
//! ```text
//! kind: smg
//! men: b1 b2
//! women: c1 c2
//! pref b1: c1 c2
//! pref b2: c1 c2
//! rel c1: b1>=b2
//! rel c2:
//! ```
//!
//! SMTI lists use parentheses for tie groups (`pref c1: (b1 b2) b3`), the
//! cyclic kinds add a `dogs:` side, and `se` carries the fixed matching as
//! `match: a1=b1 a2=b2`.

use std::collections::HashMap;
use std::fmt;

use crate::cyclic3d::{CyclicInstance, FixedMatching, SeInstance};
use crate::smg::{Matching, PrefRelation, SmgInstance};
use crate::smti::{SmtiInstance, TiedList};
use crate::{Dog, Error, Man, Result, StrictOrder, Woman};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NameTable {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl NameTable {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidInstance(format!("duplicate name {name}")));
            }
        }
        Ok(NameTable { names, index })
    }

    /// `prefix1`, `prefix2`, ... up to `n`.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        NameTable::new((1..=n).map(|i| format!("{prefix}{i}")).collect()).unwrap()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Appends a fresh name based on `base`, suffixing if taken.
    pub fn push_fresh(&mut self, base: &str) -> usize {
        let mut candidate = base.to_string();
        let mut k = 1;
        while self.index.contains_key(&candidate) {
            k += 1;
            candidate = format!("{base}_{k}");
        }
        let i = self.names.len();
        self.index.insert(candidate.clone(), i);
        self.names.push(candidate);
        i
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceData {
    Smg(SmgInstance),
    Smti(SmtiInstance),
    Cyclic(CyclicInstance),
    Se(SeInstance),
}

impl InstanceData {
    pub fn kind(&self) -> &'static str {
        match self {
            InstanceData::Smg(_) => "smg",
            InstanceData::Smti(_) => "smti",
            InstanceData::Cyclic(_) => "cyclic3d",
            InstanceData::Se(_) => "se",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub men: NameTable,
    pub women: NameTable,
    /// Present for the cyclic kinds.
    pub dogs: Option<NameTable>,
    pub data: InstanceData,
}

impl InstanceFile {
    pub fn with_default_names(data: InstanceData) -> InstanceFile {
        let (n, dogs) = match &data {
            InstanceData::Smg(i) => (i.n(), false),
            InstanceData::Smti(i) => (i.n(), false),
            InstanceData::Cyclic(i) => (i.n(), true),
            InstanceData::Se(i) => (i.n(), true),
        };
        InstanceFile {
            men: NameTable::numbered("b", n),
            women: NameTable::numbered("c", n),
            dogs: dogs.then(|| NameTable::numbered("a", n)),
            data,
        }
    }
}

fn parse_err(line: usize, message: impl fmt::Display) -> Error {
    Error::Parse {
        line,
        message: message.to_string(),
    }
}

struct Lines<'a> {
    entries: Vec<(usize, &'a str)>, // (1-based line number, trimmed content)
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let entries = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Lines { entries, pos: 0 }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let e = self.entries.get(self.pos).copied();
        if e.is_some() {
            self.pos += 1;
        }
        e
    }
}

fn split_kv(line: &str, lineno: usize) -> Result<(&str, &str)> {
    match line.split_once(':') {
        Some((k, v)) => Ok((k.trim(), v.trim())),
        None => Err(parse_err(lineno, "expected `key: value`")),
    }
}

fn resolve(table: &NameTable, name: &str, lineno: usize, side: &str) -> Result<usize> {
    table
        .lookup(name)
        .ok_or_else(|| parse_err(lineno, format!("unknown {side} name `{name}`")))
}

pub const FORMAT_VERSION: u64 = 1;

pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let mut lines = Lines::new(text);
    let (mut lineno, mut first) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty instance file"))?;
    let (key, value) = split_kv(first, lineno)?;
    if key == "format" {
        // the version line is optional; only version 1 exists
        if parse_num(value, lineno)? != FORMAT_VERSION {
            return Err(parse_err(lineno, format!("unsupported format `{value}`")));
        }
        (lineno, first) = lines
            .next()
            .ok_or_else(|| parse_err(lineno, "missing `kind:` line"))?;
    }
    let (key, kind) = split_kv(first, lineno)?;
    if key != "kind" {
        return Err(parse_err(lineno, "first line must be `kind: <kind>`"));
    }
    let has_dogs = matches!(kind, "cyclic3d" | "se");

    let mut dogs: Option<NameTable> = None;
    let mut men: Option<NameTable> = None;
    let mut women: Option<NameTable> = None;
    let mut prefs: Vec<(usize, String, String)> = Vec::new(); // (line, name, payload)
    let mut rels: Vec<(usize, String, String)> = Vec::new();
    let mut fixed: Option<(usize, String)> = None;

    while let Some((lineno, line)) = lines.next() {
        let (key, value) = split_kv(line, lineno)?;
        match key.split_whitespace().next().unwrap_or("") {
            "dogs" => {
                dogs = Some(NameTable::new(
                    value.split_whitespace().map(String::from).collect(),
                )?)
            }
            "men" => {
                men = Some(NameTable::new(
                    value.split_whitespace().map(String::from).collect(),
                )?)
            }
            "women" => {
                women = Some(NameTable::new(
                    value.split_whitespace().map(String::from).collect(),
                )?)
            }
            "pref" => {
                let name = key
                    .split_whitespace()
                    .nth(1)
                    .ok_or_else(|| parse_err(lineno, "expected `pref <name>: ...`"))?;
                prefs.push((lineno, name.to_string(), value.to_string()));
            }
            "rel" => {
                let name = key
                    .split_whitespace()
                    .nth(1)
                    .ok_or_else(|| parse_err(lineno, "expected `rel <name>: ...`"))?;
                rels.push((lineno, name.to_string(), value.to_string()));
            }
            "match" => fixed = Some((lineno, value.to_string())),
            other => return Err(parse_err(lineno, format!("unknown key `{other}`"))),
        }
    }

    let men = men.ok_or_else(|| parse_err(1, "missing `men:` line"))?;
    let women = women.ok_or_else(|| parse_err(1, "missing `women:` line"))?;
    if has_dogs && dogs.is_none() {
        return Err(parse_err(1, format!("kind {kind} requires a `dogs:` line")));
    }
    if men.len() != women.len() {
        return Err(parse_err(1, "men and women sides differ in size"));
    }
    let n = men.len();

    // collect pref lines keyed by owner
    let mut pref_of: HashMap<(char, usize), (usize, String)> = HashMap::new();
    for (lineno, name, payload) in prefs {
        let owner = if let Some(b) = men.lookup(&name) {
            ('b', b)
        } else if let Some(c) = women.lookup(&name) {
            ('c', c)
        } else if let Some(a) = dogs.as_ref().and_then(|d| d.lookup(&name)) {
            ('a', a)
        } else {
            return Err(parse_err(lineno, format!("unknown agent name `{name}`")));
        };
        if pref_of.insert(owner, (lineno, payload)).is_some() {
            return Err(parse_err(lineno, format!("duplicate pref line for `{name}`")));
        }
    }

    let strict_order = |side: char, i: usize, table: &NameTable, sname: &str| -> Result<StrictOrder> {
        let (lineno, payload) = pref_of
            .get(&(side, i))
            .ok_or_else(|| parse_err(1, format!("missing pref line for some {sname}")))?;
        let mut ranked = Vec::new();
        for tok in payload.split_whitespace() {
            ranked.push(resolve(table, tok, *lineno, sname)?);
        }
        StrictOrder::new(ranked).map_err(|e| parse_err(*lineno, e))
    };

    let data = match kind {
        "smg" => {
            let men_prefs = (0..n)
                .map(|b| strict_order('b', b, &women, "woman"))
                .collect::<Result<Vec<_>>>()?;
            let mut rel_of: HashMap<usize, (usize, String)> = HashMap::new();
            for (lineno, name, payload) in rels {
                let c = resolve(&women, &name, lineno, "woman")?;
                rel_of.insert(c, (lineno, payload));
            }
            let mut women_rels = Vec::with_capacity(n);
            for c in 0..n {
                let (lineno, payload) = rel_of
                    .get(&c)
                    .ok_or_else(|| parse_err(1, "missing rel line for some woman"))?;
                let mut pairs = Vec::new();
                for tok in payload.split_whitespace() {
                    let (x, y) = tok.split_once(">=").ok_or_else(|| {
                        parse_err(*lineno, format!("expected `man>=man`, got `{tok}`"))
                    })?;
                    pairs.push((
                        resolve(&men, x, *lineno, "man")?,
                        resolve(&men, y, *lineno, "man")?,
                    ));
                }
                women_rels.push(
                    PrefRelation::new(n, pairs).map_err(|e| parse_err(*lineno, e))?,
                );
            }
            InstanceData::Smg(
                SmgInstance::new(men_prefs, women_rels).map_err(|e| parse_err(1, e))?,
            )
        }
        "smti" => {
            let tied = |side: char, i: usize, table: &NameTable, sname: &str| -> Result<TiedList> {
                let (lineno, payload) = pref_of
                    .get(&(side, i))
                    .ok_or_else(|| parse_err(1, format!("missing pref line for some agent")))?;
                let mut groups: Vec<Vec<usize>> = Vec::new();
                let mut open: Option<Vec<usize>> = None;
                for raw in payload.split_whitespace() {
                    let mut tok = raw;
                    if let Some(rest) = tok.strip_prefix('(') {
                        if open.is_some() {
                            return Err(parse_err(*lineno, "nested tie group"));
                        }
                        open = Some(Vec::new());
                        tok = rest;
                    }
                    let closes = tok.ends_with(')');
                    let tok = tok.trim_end_matches(')');
                    let idx = resolve(table, tok, *lineno, sname)?;
                    match &mut open {
                        Some(group) => group.push(idx),
                        None => groups.push(vec![idx]),
                    }
                    if closes {
                        match open.take() {
                            Some(group) => groups.push(group),
                            None => return Err(parse_err(*lineno, "unmatched `)`")),
                        }
                    }
                }
                if open.is_some() {
                    return Err(parse_err(*lineno, "unclosed tie group"));
                }
                TiedList::new(table.len(), groups).map_err(|e| parse_err(*lineno, e))
            };
            let men_lists = (0..n)
                .map(|b| tied('b', b, &women, "woman"))
                .collect::<Result<Vec<_>>>()?;
            let women_lists = (0..n)
                .map(|c| tied('c', c, &men, "man"))
                .collect::<Result<Vec<_>>>()?;
            InstanceData::Smti(
                SmtiInstance::new(men_lists, women_lists).map_err(|e| parse_err(1, e))?,
            )
        }
        "cyclic3d" | "se" => {
            let dtable = dogs.as_ref().unwrap();
            let dog_prefs = (0..n)
                .map(|a| strict_order('a', a, &men, "man"))
                .collect::<Result<Vec<_>>>()?;
            let man_prefs = (0..n)
                .map(|b| strict_order('b', b, &women, "woman"))
                .collect::<Result<Vec<_>>>()?;
            let woman_prefs = (0..n)
                .map(|c| strict_order('c', c, dtable, "dog"))
                .collect::<Result<Vec<_>>>()?;
            let cyclic = CyclicInstance::new(dog_prefs, man_prefs, woman_prefs)
                .map_err(|e| parse_err(1, e))?;
            if kind == "cyclic3d" {
                InstanceData::Cyclic(cyclic)
            } else {
                let (lineno, payload) =
                    fixed.ok_or_else(|| parse_err(1, "kind se requires a `match:` line"))?;
                let mut dog_to_man = vec![usize::MAX; n];
                for tok in payload.split_whitespace() {
                    let (d, m) = tok.split_once('=').ok_or_else(|| {
                        parse_err(lineno, format!("expected `dog=man`, got `{tok}`"))
                    })?;
                    let a = resolve(dtable, d, lineno, "dog")?;
                    dog_to_man[a] = resolve(&men, m, lineno, "man")?;
                }
                let fixed = FixedMatching::from_vec(dog_to_man)
                    .map_err(|e| parse_err(lineno, e))?;
                InstanceData::Se(SeInstance::new(cyclic, fixed).map_err(|e| parse_err(lineno, e))?)
            }
        }
        other => return Err(parse_err(lineno, format!("unknown kind `{other}`"))),
    };

    Ok(InstanceFile {
        men,
        women,
        dogs,
        data,
    })
}

pub fn emit_instance(file: &InstanceFile) -> String {
    let mut out = String::new();
    out.push_str(&format!("format: {FORMAT_VERSION}\n"));
    out.push_str(&format!("kind: {}\n", file.data.kind()));
    if let Some(dogs) = &file.dogs {
        out.push_str(&format!("dogs: {}\n", dogs.names().join(" ")));
    }
    out.push_str(&format!("men: {}\n", file.men.names().join(" ")));
    out.push_str(&format!("women: {}\n", file.women.names().join(" ")));
    let order_line = |owner: &str, ord: &StrictOrder, table: &NameTable| -> String {
        let names: Vec<&str> = ord.ranked().iter().map(|&x| table.name(x)).collect();
        format!("pref {}: {}\n", owner, names.join(" "))
    };
    match &file.data {
        InstanceData::Smg(inst) => {
            for b in 0..inst.n() {
                out.push_str(&order_line(
                    file.men.name(b),
                    inst.man_pref(Man(b)),
                    &file.women,
                ));
            }
            for c in 0..inst.n() {
                let pairs: Vec<String> = inst
                    .relation(Woman(c))
                    .iter()
                    .map(|(x, y)| format!("{}>={}", file.men.name(x.0), file.men.name(y.0)))
                    .collect();
                out.push_str(&format!("rel {}: {}\n", file.women.name(c), pairs.join(" ")));
            }
        }
        InstanceData::Smti(inst) => {
            let tied_line = |owner: &str, list: &TiedList, table: &NameTable| -> String {
                let groups: Vec<String> = list
                    .groups()
                    .iter()
                    .map(|g| {
                        let names: Vec<&str> = g.iter().map(|&x| table.name(x)).collect();
                        if g.len() == 1 {
                            names[0].to_string()
                        } else {
                            format!("({})", names.join(" "))
                        }
                    })
                    .collect();
                format!("pref {}: {}\n", owner, groups.join(" "))
            };
            for b in 0..inst.n() {
                out.push_str(&tied_line(
                    file.men.name(b),
                    inst.man_list(Man(b)),
                    &file.women,
                ));
            }
            for c in 0..inst.n() {
                out.push_str(&tied_line(
                    file.women.name(c),
                    inst.woman_list(Woman(c)),
                    &file.men,
                ));
            }
        }
        InstanceData::Cyclic(inst) => {
            emit_cyclic(&mut out, file, inst, order_line);
        }
        InstanceData::Se(se) => {
            emit_cyclic(&mut out, file, &se.cyclic, order_line);
            let dogs = file.dogs.as_ref().unwrap();
            let pairs: Vec<String> = (0..se.n())
                .map(|a| {
                    format!(
                        "{}={}",
                        dogs.name(a),
                        file.men.name(se.fixed.man_of(Dog(a)).0)
                    )
                })
                .collect();
            out.push_str(&format!("match: {}\n", pairs.join(" ")));
        }
    }
    out
}

fn emit_cyclic(
    out: &mut String,
    file: &InstanceFile,
    inst: &CyclicInstance,
    order_line: impl Fn(&str, &StrictOrder, &NameTable) -> String,
) {
    let dogs = file.dogs.as_ref().unwrap();
    for a in 0..inst.n() {
        out.push_str(&order_line(dogs.name(a), inst.dog_pref(Dog(a)), &file.men));
    }
    for b in 0..inst.n() {
        out.push_str(&order_line(
            file.men.name(b),
            inst.man_pref(Man(b)),
            &file.women,
        ));
    }
    for c in 0..inst.n() {
        out.push_str(&order_line(
            file.women.name(c),
            inst.woman_pref(Woman(c)),
            dogs,
        ));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResultVerdict {
    StableMatchingFound,
    NoStableMatching,
    NotFound,
    InfeasibleLp,
}

impl ResultVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            ResultVerdict::StableMatchingFound => "stable-matching-found",
            ResultVerdict::NoStableMatching => "no-stable-matching",
            ResultVerdict::NotFound => "not-found",
            ResultVerdict::InfeasibleLp => "infeasible-lp",
        }
    }

    pub fn from_str(s: &str) -> Option<Self> {
        match s {
            "stable-matching-found" => Some(ResultVerdict::StableMatchingFound),
            "no-stable-matching" => Some(ResultVerdict::NoStableMatching),
            "not-found" => Some(ResultVerdict::NotFound),
            "infeasible-lp" => Some(ResultVerdict::InfeasibleLp),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultFile {
    pub verdict: ResultVerdict,
    pub algorithm: Option<String>,
    pub matching: Vec<(String, String)>,
    pub blocking_pairs: Vec<(String, String)>,
    pub blocking_triples: Vec<(String, String, String)>,
    pub rounds: Option<u64>,
    pub proposals: Option<u64>,
    pub pivots: Option<u64>,
    pub wall_ms: Option<u64>,
}

impl ResultFile {
    pub fn new(verdict: ResultVerdict) -> Self {
        ResultFile {
            verdict,
            algorithm: None,
            matching: Vec::new(),
            blocking_pairs: Vec::new(),
            blocking_triples: Vec::new(),
            rounds: None,
            proposals: None,
            pivots: None,
            wall_ms: None,
        }
    }
}

pub fn emit_result(res: &ResultFile) -> String {
    let mut out = String::new();
    out.push_str(&format!("verdict: {}\n", res.verdict.as_str()));
    if let Some(a) = &res.algorithm {
        out.push_str(&format!("algorithm: {a}\n"));
    }
    if let Some(r) = res.rounds {
        out.push_str(&format!("rounds: {r}\n"));
    }
    if let Some(p) = res.proposals {
        out.push_str(&format!("proposals: {p}\n"));
    }
    if let Some(p) = res.pivots {
        out.push_str(&format!("pivots: {p}\n"));
    }
    if let Some(w) = res.wall_ms {
        out.push_str(&format!("wall-ms: {w}\n"));
    }
    if !res.matching.is_empty() {
        let pairs: Vec<String> = res
            .matching
            .iter()
            .map(|(b, c)| format!("{b}={c}"))
            .collect();
        out.push_str(&format!("matching: {}\n", pairs.join(" ")));
    }
    if !res.blocking_pairs.is_empty() {
        let pairs: Vec<String> = res
            .blocking_pairs
            .iter()
            .map(|(b, c)| format!("{b},{c}"))
            .collect();
        out.push_str(&format!("blocking: {}\n", pairs.join(" ")));
    }
    if !res.blocking_triples.is_empty() {
        let triples: Vec<String> = res
            .blocking_triples
            .iter()
            .map(|(a, b, c)| format!("{a},{b},{c}"))
            .collect();
        out.push_str(&format!("blocking3: {}\n", triples.join(" ")));
    }
    out
}

pub fn parse_result(text: &str) -> Result<ResultFile> {
    let mut res: Option<ResultFile> = None;
    let mut lines = Lines::new(text);
    while let Some((lineno, line)) = lines.next() {
        let (key, value) = split_kv(line, lineno)?;
        match key {
            "verdict" => {
                let v = ResultVerdict::from_str(value)
                    .ok_or_else(|| parse_err(lineno, format!("unknown verdict `{value}`")))?;
                res = Some(ResultFile::new(v));
            }
            _ => {
                let r = res
                    .as_mut()
                    .ok_or_else(|| parse_err(lineno, "result must start with `verdict:`"))?;
                match key {
                    "algorithm" => r.algorithm = Some(value.to_string()),
                    "rounds" => r.rounds = Some(parse_num(value, lineno)?),
                    "proposals" => r.proposals = Some(parse_num(value, lineno)?),
                    "pivots" => r.pivots = Some(parse_num(value, lineno)?),
                    "wall-ms" => r.wall_ms = Some(parse_num(value, lineno)?),
                    "matching" => {
                        for tok in value.split_whitespace() {
                            let (b, c) = tok.split_once('=').ok_or_else(|| {
                                parse_err(lineno, format!("expected `man=woman`, got `{tok}`"))
                            })?;
                            r.matching.push((b.to_string(), c.to_string()));
                        }
                    }
                    "blocking" => {
                        for tok in value.split_whitespace() {
                            let (b, c) = tok.split_once(',').ok_or_else(|| {
                                parse_err(lineno, format!("expected `man,woman`, got `{tok}`"))
                            })?;
                            r.blocking_pairs.push((b.to_string(), c.to_string()));
                        }
                    }
                    "blocking3" => {
                        for tok in value.split_whitespace() {
                            let mut it = tok.split(',');
                            match (it.next(), it.next(), it.next(), it.next()) {
                                (Some(a), Some(b), Some(c), None) => r.blocking_triples.push((
                                    a.to_string(),
                                    b.to_string(),
                                    c.to_string(),
                                )),
                                _ => {
                                    return Err(parse_err(
                                        lineno,
                                        format!("expected `dog,man,woman`, got `{tok}`"),
                                    ))
                                }
                            }
                        }
                    }
                    other => return Err(parse_err(lineno, format!("unknown key `{other}`"))),
                }
            }
        }
    }
    res.ok_or_else(|| parse_err(1, "empty result file"))
}

/// Parses `man=woman` tokens against the given name tables; accepts either
/// a bare token list or a file containing a `matching:` line.
pub fn parse_matching_text(
    text: &str,
    men: &NameTable,
    women: &NameTable,
) -> Result<Matching> {
    let mut pairs = Vec::new();
    for (lineno, line) in Lines::new(text).entries {
        let payload = match line.split_once(':') {
            Some(("matching", v)) => v,
            Some(_) => continue,
            None => line,
        };
        for tok in payload.split_whitespace() {
            let (b, c) = tok
                .split_once('=')
                .ok_or_else(|| parse_err(lineno, format!("expected `man=woman`, got `{tok}`")))?;
            pairs.push((
                Man(resolve(men, b, lineno, "man")?),
                Woman(resolve(women, c, lineno, "woman")?),
            ));
        }
    }
    Matching::from_pairs(men.len(), pairs)
}


fn parse_num(value: &str, lineno: usize) -> Result<u64> {
    value
        .parse()
        .map_err(|_| parse_err(lineno, format!("expected a number, got `{value}`")))
}
