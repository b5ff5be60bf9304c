//! JSON descriptions of set operads: a builtin name or explicit tables.
//!
//! ```json
//! "endomorphism:2"
//! {"sequence": {"components": {...}}, "unit": "e",
//!  "compose": [{"outer": "m", "inners": ["e", "e"], "result": "m"}]}
//! ```
//!
//! Table operads are finite, so they are only closed under composition when
//! all their elements have arity at most one, or when the table is read as a
//! truncation; a composite missing from the table is an error at use time.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{and_operad, or_operad, xor_operad, Associative, Endomorphism, Initial, SetOperad, SubOperad, Terminal};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::symseq::{ElemSource, FinSymSeq, SeqElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    Terminal,
    Initial,
    Associative,
    Endomorphism(usize),
    And,
    Or,
    Xor,
}

impl Builtin {
    pub fn parse(s: &str) -> Result<Builtin> {
        Ok(match s {
            "terminal" => Builtin::Terminal,
            "initial" => Builtin::Initial,
            "associative" => Builtin::Associative,
            "and" => Builtin::And,
            "or" => Builtin::Or,
            "xor" => Builtin::Xor,
            _ => match s.strip_prefix("endomorphism:") {
                Some(n) => Builtin::Endomorphism(n.parse().map_err(|_| Error::Parse(format!("bad set size in {s:?}")))?),
                None => return Err(Error::Parse(format!("unknown builtin operad {s:?}"))),
            },
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComposeEntry {
    pub outer: String,
    pub inners: Vec<String>,
    pub result: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableJson {
    pub sequence: FinSymSeq,
    pub unit: String,
    pub compose: Vec<ComposeEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperadSpec {
    Builtin(String),
    Table(TableJson),
}

/// An operad given by finite tables. Labels must be unique across arities.
#[derive(Clone, Debug)]
pub struct TableOperad {
    seq: FinSymSeq,
    unit: SeqElem,
    table: BTreeMap<(SeqElem, Vec<SeqElem>), SeqElem>,
}

impl TableOperad {
    pub fn from_json(raw: &TableJson) -> Result<TableOperad> {
        let seq = raw.sequence.clone();
        let mut by_label: HashMap<String, SeqElem> = HashMap::new();
        for k in seq.arities() {
            for index in 0..seq.len(k) {
                let label = seq.label_of(k, index).to_string();
                if by_label.insert(label.clone(), SeqElem { arity: k, index }).is_some() {
                    return Err(Error::InvalidOperad(format!("label {label:?} used in two arities")));
                }
            }
        }
        let find = |l: &str| {
            by_label
                .get(l)
                .copied()
                .ok_or_else(|| Error::InvalidOperad(format!("unknown label {l:?}")))
        };
        let unit = find(&raw.unit)?;
        if unit.arity != 1 {
            return Err(Error::InvalidOperad("unit must have arity 1".into()));
        }
        let mut table = BTreeMap::new();
        for entry in &raw.compose {
            let outer = find(&entry.outer)?;
            let inners = entry.inners.iter().map(|l| find(l)).collect::<Result<Vec<_>>>()?;
            if outer.arity != inners.len() {
                return Err(Error::InvalidOperad(format!("entry for {:?} has the wrong number of inputs", entry.outer)));
            }
            let result = find(&entry.result)?;
            let total: usize = inners.iter().map(|e| e.arity).sum();
            if result.arity != total {
                return Err(Error::InvalidOperad(format!("entry for {:?} has a result of the wrong arity", entry.outer)));
            }
            if table.insert((outer, inners), result).is_some() {
                return Err(Error::InvalidOperad(format!("duplicate entry for {:?}", entry.outer)));
            }
        }
        Ok(TableOperad { seq, unit, table })
    }

    pub fn sequence(&self) -> &FinSymSeq {
        &self.seq
    }
}

impl ElemSource for TableOperad {
    type Elem = SeqElem;

    fn arity_of(&self, e: &SeqElem) -> usize {
        e.arity
    }

    fn act(&self, e: &SeqElem, p: &Permutation) -> SeqElem {
        self.seq.act(e, p)
    }

    fn elements(&self, k: usize) -> Result<Vec<SeqElem>> {
        self.seq.elements(k)
    }

    fn top_arity(&self) -> Option<usize> {
        self.seq.max_arity()
    }

    fn label(&self, e: &SeqElem) -> String {
        self.seq.label(e)
    }
}

impl SetOperad for TableOperad {
    fn unit(&self) -> SeqElem {
        self.unit
    }

    fn compose(&self, outer: &SeqElem, inners: &[SeqElem]) -> Result<SeqElem> {
        if outer.arity != inners.len() {
            return Err(Error::ArityMismatch {
                expected: outer.arity,
                found: inners.len(),
            });
        }
        self.table
            .get(&(*outer, inners.to_vec()))
            .copied()
            .ok_or_else(|| Error::InvalidOperad(format!("composite of {} is not tabulated", self.seq.label(outer))))
    }

    fn name(&self) -> String {
        "table".into()
    }
}

/// A loaded operad of any supported kind.
#[derive(Clone, Debug)]
pub enum AnyOperad {
    Terminal(Terminal),
    Initial(Initial),
    Associative(Associative),
    Endomorphism(Endomorphism),
    Sub(SubOperad<Endomorphism>),
    Table(TableOperad),
}

/// Runs `$body` with `$op` bound to the concrete operad inside an
/// [`AnyOperad`].
#[macro_export]
macro_rules! with_operad {
    ($any:expr, |$op:ident| $body:expr) => {
        match $any {
            $crate::operad::AnyOperad::Terminal($op) => $body,
            $crate::operad::AnyOperad::Initial($op) => $body,
            $crate::operad::AnyOperad::Associative($op) => $body,
            $crate::operad::AnyOperad::Endomorphism($op) => $body,
            $crate::operad::AnyOperad::Sub($op) => $body,
            $crate::operad::AnyOperad::Table($op) => $body,
        }
    };
}

pub fn load_operad(spec: &OperadSpec) -> Result<AnyOperad> {
    Ok(match spec {
        OperadSpec::Builtin(name) => match Builtin::parse(name)? {
            Builtin::Terminal => AnyOperad::Terminal(Terminal),
            Builtin::Initial => AnyOperad::Initial(Initial),
            Builtin::Associative => AnyOperad::Associative(Associative),
            Builtin::Endomorphism(n) => AnyOperad::Endomorphism(Endomorphism::new(n)?),
            Builtin::And => AnyOperad::Sub(and_operad()),
            Builtin::Or => AnyOperad::Sub(or_operad()),
            Builtin::Xor => AnyOperad::Sub(xor_operad()),
        },
        OperadSpec::Table(t) => AnyOperad::Table(TableOperad::from_json(t)?),
    })
}

impl AnyOperad {
    pub fn name(&self) -> String {
        with_operad!(self, |op| op.name())
    }
}
