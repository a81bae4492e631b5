//! Tagged text blocks for certificates.
//!
//! ```text
//! cert negcycle            cert neghyper            cert t2wit
//! a <tail> <head> <w>      nodes <v> ...            s <idx> <v> ...
//! ...                      mh <pivot> <w> <v> ...   violated <c2-index>
//! end                      end                      end
//!
//! cert unsatcore           cert clfs                cert t2seq
//! var <v>                  s <idx> <v> ...          step
//! impl fwd <cl> <l> <l'>   cyc <X>                  <clfs body>
//! impl bwd <cl> <l> <l'>   nodes ... / mh ...       witness <c2-index>
//! end                      endcyc ... end           endstep ... end
//! ```
//!
//! Literals in unsat cores are signed 1-based variable numbers.

use std::fmt::Write as _;

use super::IoError;
use crate::certify::{ClfsCertificate, NegativeHypercycle, T2HytpSequence, T2HytpStep};
use crate::hytn::{Hyperarc, Orientation};
use crate::model::{Certificate, Schedule, Weight};
use crate::stn::StnArc;
use crate::twosat::{ImplicationStep, Lit, UnsatCore};

fn lit_code(l: Lit) -> i64 {
    let v = (l.var + 1) as i64;
    if l.positive {
        v
    } else {
        -v
    }
}

fn emit_hypercycle(out: &mut String, hc: &NegativeHypercycle) {
    write!(out, "nodes").unwrap();
    for v in &hc.nodes {
        write!(out, " {v}").unwrap();
    }
    out.push('\n');
    for a in &hc.arcs {
        write!(out, "mh {}", a.pivot).unwrap();
        for &(v, w) in a.others() {
            write!(out, " {w} {v}").unwrap();
        }
        out.push('\n');
    }
}

fn emit_clfs_body(out: &mut String, c: &ClfsCertificate) {
    for (tp, v) in c.schedule.values().iter().enumerate() {
        writeln!(out, "s {tp} {v}").unwrap();
    }
    for (x, hc) in c.hypercycles.iter().enumerate() {
        writeln!(out, "cyc {x}").unwrap();
        emit_hypercycle(out, hc);
        writeln!(out, "endcyc").unwrap();
    }
}

/// Serializes a certified least feasible schedule as its own block.
pub fn emit_clfs_certificate(c: &ClfsCertificate) -> String {
    let mut out = String::from("cert clfs\n");
    emit_clfs_body(&mut out, c);
    out.push_str("end\n");
    out
}

/// Serializes a certificate as a tagged block.
pub fn emit_certificate(cert: &Certificate) -> String {
    let mut out = String::new();
    match cert {
        Certificate::NegativeCycle(arcs) => {
            writeln!(out, "cert negcycle").unwrap();
            for a in arcs {
                writeln!(out, "a {} {} {}", a.tail, a.head, a.weight).unwrap();
            }
        }
        Certificate::T2Witness {
            schedule,
            constraint,
        } => {
            writeln!(out, "cert t2wit").unwrap();
            for (tp, v) in schedule.values().iter().enumerate() {
                writeln!(out, "s {tp} {v}").unwrap();
            }
            writeln!(out, "violated {constraint}").unwrap();
        }
        Certificate::UnsatCore(core) => {
            writeln!(out, "cert unsatcore").unwrap();
            writeln!(out, "var {}", core.variable).unwrap();
            for (dir, steps) in [("fwd", &core.pos_to_neg), ("bwd", &core.neg_to_pos)] {
                for s in steps {
                    writeln!(
                        out,
                        "impl {dir} {} {} {}",
                        s.clause,
                        lit_code(s.from),
                        lit_code(s.to)
                    )
                    .unwrap();
                }
            }
        }
        Certificate::NegativeHypercycle(hc) => {
            writeln!(out, "cert neghyper").unwrap();
            emit_hypercycle(&mut out, hc);
        }
        Certificate::T2HytpSequence(seq) => {
            writeln!(out, "cert t2seq").unwrap();
            for step in &seq.steps {
                writeln!(out, "step").unwrap();
                emit_clfs_body(&mut out, &step.clfs);
                writeln!(out, "witness {}", step.witness).unwrap();
                writeln!(out, "endstep").unwrap();
            }
        }
    }
    out.push_str("end\n");
    out
}

struct Cursor {
    rows: Vec<(usize, Vec<String>)>,
    pos: usize,
}

impl Cursor {
    fn new(text: &str) -> Cursor {
        let rows = text
            .lines()
            .enumerate()
            .filter_map(|(i, raw)| {
                let toks: Vec<String> = raw.split_whitespace().map(str::to_string).collect();
                match toks.first() {
                    None => None,
                    Some(t) if t.starts_with('#') => None,
                    Some(_) => Some((i + 1, toks)),
                }
            })
            .collect();
        Cursor { rows, pos: 0 }
    }

    fn peek(&self) -> Option<&(usize, Vec<String>)> {
        self.rows.get(self.pos)
    }

    fn next(&mut self) -> Result<&(usize, Vec<String>), IoError> {
        let row = self.rows.get(self.pos).ok_or(IoError::Semantic {
            line: 0,
            msg: "unexpected end of certificate".to_string(),
        })?;
        self.pos += 1;
        Ok(row)
    }
}

fn semantic(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Semantic {
        line,
        msg: msg.into(),
    }
}

fn parse_int<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T, IoError> {
    tok.parse::<T>()
        .map_err(|_| semantic(line, format!("expected {what}, got `{tok}`")))
}

fn parse_lit(line: usize, tok: &str) -> Result<Lit, IoError> {
    let code: i64 = parse_int(line, tok, "a signed literal")?;
    if code == 0 {
        return Err(semantic(line, "literal 0 is not valid"));
    }
    let var = (code.unsigned_abs() - 1) as usize;
    Ok(if code > 0 { Lit::pos(var) } else { Lit::neg(var) })
}

/// Schedule lines `s <idx> <v>` with dense indices from 0.
fn parse_schedule_rows(cur: &mut Cursor) -> Result<Schedule, IoError> {
    let mut values: Vec<Weight> = Vec::new();
    while let Some((line, toks)) = cur.peek() {
        if toks[0] != "s" {
            break;
        }
        let (line, toks) = (*line, toks.clone());
        cur.pos += 1;
        if toks.len() != 3 {
            return Err(semantic(line, "schedule lines are `s <idx> <value>`"));
        }
        let idx: usize = parse_int(line, &toks[1], "a time-point index")?;
        if idx != values.len() {
            return Err(semantic(line, "schedule indices must be dense from 0"));
        }
        values.push(parse_int(line, &toks[2], "an integer value")?);
    }
    Ok(Schedule::from_values(values))
}

/// `nodes ...` then `mh ...` rows, up to (not consuming) the terminator.
fn parse_hypercycle(cur: &mut Cursor, term: &str) -> Result<NegativeHypercycle, IoError> {
    let (line, toks) = cur.next()?;
    let (line, toks) = (*line, toks.clone());
    if toks[0] != "nodes" {
        return Err(semantic(line, "hypercycle starts with a `nodes` row"));
    }
    let nodes = toks[1..]
        .iter()
        .map(|t| parse_int(line, t, "a node index"))
        .collect::<Result<Vec<usize>, _>>()?;
    let mut arcs = Vec::new();
    loop {
        let Some((line, toks)) = cur.peek() else {
            return Err(semantic(0, format!("hypercycle not closed by `{term}`")));
        };
        let (line, toks) = (*line, toks.clone());
        if toks[0] == term {
            break;
        }
        cur.pos += 1;
        if toks[0] != "mh" || toks.len() < 4 || toks.len() % 2 != 0 {
            return Err(semantic(line, "hypercycle arcs are `mh pivot w v ...`"));
        }
        let pivot: usize = parse_int(line, &toks[1], "a node index")?;
        let mut others = Vec::new();
        for pair in toks[2..].chunks(2) {
            let w: Weight = parse_int(line, &pair[0], "a weight")?;
            let v: usize = parse_int(line, &pair[1], "a node index")?;
            others.push((v, w));
        }
        let arc = Hyperarc::new(Orientation::MultiHead, pivot, others)
            .map_err(|e| semantic(line, e.to_string()))?;
        arcs.push(arc);
    }
    Ok(NegativeHypercycle { nodes, arcs })
}

fn parse_clfs_body(cur: &mut Cursor, term: &str) -> Result<ClfsCertificate, IoError> {
    let schedule = parse_schedule_rows(cur)?;
    let mut hypercycles = Vec::new();
    loop {
        let Some((line, toks)) = cur.peek() else {
            return Err(semantic(0, format!("clfs block not closed by `{term}`")));
        };
        let (line, toks) = (*line, toks.clone());
        if toks[0] == term {
            break;
        }
        cur.pos += 1;
        if toks[0] != "cyc" || toks.len() != 2 {
            return Err(semantic(line, "expected `cyc <X>` row"));
        }
        let x: usize = parse_int(line, &toks[1], "a node index")?;
        if x != hypercycles.len() {
            return Err(semantic(line, "cyc blocks must be dense from 0"));
        }
        hypercycles.push(parse_hypercycle(cur, "endcyc")?);
        let (eline, etoks) = cur.next()?;
        if etoks[0] != "endcyc" {
            return Err(semantic(*eline, "expected `endcyc`"));
        }
    }
    if schedule.len() != hypercycles.len() {
        return Err(semantic(
            0,
            "clfs schedule and hypercycle family sizes differ",
        ));
    }
    Ok(ClfsCertificate {
        schedule,
        hypercycles,
    })
}

/// Any parsed certificate block: inconsistency certificates or a certified
/// least feasible schedule.
#[derive(Clone, PartialEq, Debug)]
pub enum CertBlock {
    Certificate(Certificate),
    Clfs(ClfsCertificate),
}

/// Parses one tagged inconsistency certificate block.
pub fn parse_certificate(text: &str) -> Result<Certificate, IoError> {
    match parse_cert_block(text)? {
        CertBlock::Certificate(c) => Ok(c),
        CertBlock::Clfs(_) => Err(IoError::Semantic {
            line: 1,
            msg: "`cert clfs` certifies a consistent solve, not inconsistency".to_string(),
        }),
    }
}

/// Parses one tagged certificate block of any kind.
pub fn parse_cert_block(text: &str) -> Result<CertBlock, IoError> {
    let mut cur = Cursor::new(text);
    let (line, toks) = cur.next()?;
    let (line, toks) = (*line, toks.clone());
    if toks[0] != "cert" || toks.len() != 2 {
        return Err(semantic(line, "certificate starts with `cert <tag>`"));
    }
    if toks[1] == "clfs" {
        let clfs = parse_clfs_body(&mut cur, "end")?;
        let (eline, etoks) = cur.next()?;
        if etoks[0] != "end" {
            return Err(semantic(*eline, "certificate must close with `end`"));
        }
        return Ok(CertBlock::Clfs(clfs));
    }
    let cert = match toks[1].as_str() {
        "negcycle" => {
            let mut arcs = Vec::new();
            while let Some((line, toks)) = cur.peek() {
                if toks[0] != "a" {
                    break;
                }
                let (line, toks) = (*line, toks.clone());
                cur.pos += 1;
                if toks.len() != 4 {
                    return Err(semantic(line, "cycle arcs are `a <tail> <head> <w>`"));
                }
                arcs.push(StnArc::new(
                    parse_int(line, &toks[1], "a node index")?,
                    parse_int(line, &toks[2], "a node index")?,
                    parse_int(line, &toks[3], "a weight")?,
                ));
            }
            Certificate::NegativeCycle(arcs)
        }
        "t2wit" => {
            let schedule = parse_schedule_rows(&mut cur)?;
            let (line, toks) = cur.next()?;
            let (line, toks) = (*line, toks.clone());
            if toks[0] != "violated" || toks.len() != 2 {
                return Err(semantic(line, "expected `violated <c2-index>`"));
            }
            Certificate::T2Witness {
                schedule,
                constraint: parse_int(line, &toks[1], "a constraint index")?,
            }
        }
        "unsatcore" => {
            let (line, toks) = cur.next()?;
            let (line, toks) = (*line, toks.clone());
            if toks[0] != "var" || toks.len() != 2 {
                return Err(semantic(line, "expected `var <v>`"));
            }
            let variable: usize = parse_int(line, &toks[1], "a variable")?;
            let mut pos_to_neg = Vec::new();
            let mut neg_to_pos = Vec::new();
            while let Some((line, toks)) = cur.peek() {
                if toks[0] != "impl" {
                    break;
                }
                let (line, toks) = (*line, toks.clone());
                cur.pos += 1;
                if toks.len() != 5 {
                    return Err(semantic(line, "expected `impl fwd|bwd <clause> <from> <to>`"));
                }
                let step = ImplicationStep {
                    clause: parse_int(line, &toks[2], "a clause index")?,
                    from: parse_lit(line, &toks[3])?,
                    to: parse_lit(line, &toks[4])?,
                };
                match toks[1].as_str() {
                    "fwd" => pos_to_neg.push(step),
                    "bwd" => neg_to_pos.push(step),
                    other => {
                        return Err(semantic(line, format!("unknown direction `{other}`")))
                    }
                }
            }
            Certificate::UnsatCore(UnsatCore {
                variable,
                pos_to_neg,
                neg_to_pos,
            })
        }
        "neghyper" => Certificate::NegativeHypercycle(parse_hypercycle(&mut cur, "end")?),
        "t2seq" => {
            let mut steps = Vec::new();
            while let Some((_, toks)) = cur.peek() {
                if toks[0] != "step" {
                    break;
                }
                cur.pos += 1;
                let clfs = parse_clfs_body(&mut cur, "witness")?;
                let (line, toks) = cur.next()?;
                let (line, toks) = (*line, toks.clone());
                if toks[0] != "witness" || toks.len() != 2 {
                    return Err(semantic(line, "expected `witness <c2-index>`"));
                }
                let witness = parse_int(line, &toks[1], "a constraint index")?;
                let (eline, etoks) = cur.next()?;
                if etoks[0] != "endstep" {
                    return Err(semantic(*eline, "expected `endstep`"));
                }
                steps.push(T2HytpStep { clfs, witness });
            }
            Certificate::T2HytpSequence(T2HytpSequence { steps })
        }
        other => return Err(semantic(line, format!("unknown certificate tag `{other}`"))),
    };
    let (eline, etoks) = cur.next()?;
    if etoks[0] != "end" {
        return Err(semantic(*eline, "certificate must close with `end`"));
    }
    Ok(CertBlock::Certificate(cert))
}
