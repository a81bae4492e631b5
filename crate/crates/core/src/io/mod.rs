//! Parsing and serialization: the line-oriented instance format, schedule
//! files, certificate blocks, and DIMACS CNF input.
//!
//! The instance format is record-per-line, whitespace-separated, with `#`
//! comment lines and LF endings:
//!
//! ```text
//! kind rdtn            # or hytn-head | hytn-tail | hytn-blend
//! meta <key> <value>   # optional free-form header entries
//! tp <N>               # time-point count, before any constraint
//! t1 <x> <y> <w>       # y - x <= w
//! t2 <x> <l1> <u1> [<l2> <u2> ...]
//! t3 <x> <l1> <u1> <y> <l2> <u2>
//! mh <tail> <w1> <h1> [<w2> <h2> ...]
//! mt <head> <w1> <t1> [<w2> <t2> ...]
//! ```
//!
//! Schedules are `s <idx> <value>` lines; certificates are tagged blocks
//! (`cert <tag>` ... `end`). Parsing establishes every model invariant, so a
//! parsed document is canonical and `parse(emit(d)) == d`.

mod cert;
mod dimacs;
mod text;

pub use cert::{
    emit_certificate, emit_clfs_certificate, parse_cert_block, parse_certificate, CertBlock,
};
pub use dimacs::parse_dimacs_cnf;
pub use text::{emit_instance, emit_schedule, parse_instance, parse_schedule};

use thiserror::Error;

use crate::hytn::Orientation;
use crate::model::Network;

/// Errors from parsing or validating serialized artifacts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: {msg}")]
    Semantic { line: usize, msg: String },
}

/// Document kinds of the instance format.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DocKind {
    Rdtn,
    HytnHead,
    HytnTail,
    HytnBlend,
}

impl DocKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DocKind::Rdtn => "rdtn",
            DocKind::HytnHead => "hytn-head",
            DocKind::HytnTail => "hytn-tail",
            DocKind::HytnBlend => "hytn-blend",
        }
    }

    pub fn parse(s: &str) -> Option<DocKind> {
        match s {
            "rdtn" => Some(DocKind::Rdtn),
            "hytn-head" => Some(DocKind::HytnHead),
            "hytn-tail" => Some(DocKind::HytnTail),
            "hytn-blend" => Some(DocKind::HytnBlend),
            _ => None,
        }
    }

    /// The kind a network naturally serializes as: pure hyper networks take
    /// their orientation, blended ones are `hytn-blend`.
    pub fn infer(net: &Network) -> DocKind {
        match net {
            Network::Rdtn(_) => DocKind::Rdtn,
            Network::Hytn(h) => {
                if h.c2().is_empty() && h.c3().is_empty() {
                    match h.orientation() {
                        Orientation::MultiHead => DocKind::HytnHead,
                        Orientation::MultiTail => DocKind::HytnTail,
                    }
                } else {
                    DocKind::HytnBlend
                }
            }
        }
    }
}

impl std::fmt::Display for DocKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A parsed instance: kind tag, network body, and free-form metadata.
#[derive(Clone, PartialEq, Debug)]
pub struct InstanceDocument {
    pub kind: DocKind,
    pub body: Network,
    pub metadata: Vec<(String, String)>,
}

impl InstanceDocument {
    /// Builds a document, checking that the kind matches the body: `rdtn`
    /// holds no hyperarcs, `hytn-head`/`hytn-tail` are pure networks of the
    /// right orientation, and `hytn-blend` carries hyperarcs plus exactly
    /// one of the two disjunctive constraint classes.
    pub fn new(
        kind: DocKind,
        body: Network,
        metadata: Vec<(String, String)>,
    ) -> Result<InstanceDocument, IoError> {
        let fail = |msg: &str| {
            Err(IoError::Semantic {
                line: 0,
                msg: msg.to_string(),
            })
        };
        match (&kind, &body) {
            (DocKind::Rdtn, Network::Rdtn(_)) => {}
            (DocKind::Rdtn, Network::Hytn(_)) => return fail("rdtn document with hyperarcs"),
            (_, Network::Rdtn(_)) => return fail("hytn document without hyperarc body"),
            (DocKind::HytnHead, Network::Hytn(h)) => {
                if !h.c2().is_empty() || !h.c3().is_empty() {
                    return fail("hytn-head document must be pure (use hytn-blend)");
                }
                if h.orientation() != Orientation::MultiHead {
                    return fail("hytn-head document with multi-tail hyperarcs");
                }
            }
            (DocKind::HytnTail, Network::Hytn(h)) => {
                if !h.c2().is_empty() || !h.c3().is_empty() {
                    return fail("hytn-tail document must be pure (use hytn-blend)");
                }
                if h.arcs().is_empty() || h.orientation() != Orientation::MultiTail {
                    return fail("hytn-tail document needs multi-tail hyperarcs");
                }
            }
            (DocKind::HytnBlend, Network::Hytn(h)) => {
                if h.arcs().is_empty() {
                    return fail("hytn-blend document needs hyperarcs (use rdtn)");
                }
                if h.c2().is_empty() == h.c3().is_empty() {
                    return fail("hytn-blend document needs exactly one of t2/t3 constraints");
                }
            }
        }
        Ok(InstanceDocument {
            kind,
            body,
            metadata,
        })
    }

    /// Document with the kind inferred from the body.
    pub fn from_network(body: Network) -> InstanceDocument {
        InstanceDocument::new(DocKind::infer(&body), body, Vec::new())
            .expect("inferred kind always matches")
    }
}

/// A CNF formula in DIMACS convention: variables `1..=var_count`, literals
/// as signed non-zero integers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CnfFormula {
    pub var_count: usize,
    pub clauses: Vec<Vec<i32>>,
}
