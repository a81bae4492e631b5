//! The instance and schedule text formats.

use std::fmt::Write as _;

use super::{DocKind, InstanceDocument, IoError};
use crate::hytn::{Hyperarc, Hytn, Orientation};
use crate::model::{
    Interval, Network, Rdtn, Schedule, T1Constraint, T2Constraint, T3Constraint, TimePointId,
    Weight,
};

/// Tokens of one line with their 1-based starting columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

struct LineCtx {
    line: usize,
}

impl LineCtx {
    fn syntax(&self, col: usize, msg: impl Into<String>) -> IoError {
        IoError::Syntax {
            line: self.line,
            col,
            msg: msg.into(),
        }
    }

    fn semantic(&self, msg: impl Into<String>) -> IoError {
        IoError::Semantic {
            line: self.line,
            msg: msg.into(),
        }
    }

    fn int<T: std::str::FromStr>(&self, tok: (usize, &str), what: &str) -> Result<T, IoError> {
        tok.1
            .parse::<T>()
            .map_err(|_| self.syntax(tok.0, format!("expected {what}, got `{}`", tok.1)))
    }

    fn weight(&self, tok: (usize, &str)) -> Result<Weight, IoError> {
        let w: Weight = self.int(tok, "an integer weight")?;
        if w == Weight::MIN {
            return Err(self.semantic("weight out of range (i64::MIN is reserved)"));
        }
        Ok(w)
    }

    fn node(&self, tok: (usize, &str), n: usize) -> Result<usize, IoError> {
        let v: usize = self.int(tok, "a time-point index")?;
        if v >= n {
            return Err(self.semantic(format!("time-point {v} out of range (tp {n})")));
        }
        Ok(v)
    }
}

/// Parses an instance document, establishing every model invariant.
pub fn parse_instance(text: &str) -> Result<InstanceDocument, IoError> {
    let mut kind: Option<(usize, DocKind)> = None;
    let mut n: Option<usize> = None;
    let mut metadata = Vec::new();
    let mut c1: Vec<T1Constraint> = Vec::new();
    let mut c2: Vec<T2Constraint> = Vec::new();
    let mut c3: Vec<T3Constraint> = Vec::new();
    let mut arcs: Vec<Hyperarc> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let ctx = LineCtx { line: idx + 1 };
        let toks = tokens(raw);
        let Some(&(_, first)) = toks.first() else {
            continue;
        };
        if first.starts_with('#') {
            continue;
        }
        if kind.is_none() && first != "kind" {
            return Err(ctx.semantic("first record must be `kind`"));
        }
        match first {
            "kind" => {
                if kind.is_some() {
                    return Err(ctx.semantic("duplicate `kind` record"));
                }
                let tok = toks
                    .get(1)
                    .ok_or_else(|| ctx.syntax(raw.len() + 1, "missing document kind"))?;
                let k = DocKind::parse(tok.1)
                    .ok_or_else(|| ctx.syntax(tok.0, format!("unknown kind `{}`", tok.1)))?;
                kind = Some((ctx.line, k));
            }
            "meta" => {
                let key = toks
                    .get(1)
                    .ok_or_else(|| ctx.syntax(raw.len() + 1, "missing meta key"))?;
                let value = toks
                    .get(2..)
                    .unwrap_or(&[])
                    .iter()
                    .map(|&(_, t)| t)
                    .collect::<Vec<_>>()
                    .join(" ");
                metadata.push((key.1.to_string(), value));
            }
            "tp" => {
                if n.is_some() {
                    return Err(ctx.semantic("duplicate `tp` record"));
                }
                let tok = toks
                    .get(1)
                    .ok_or_else(|| ctx.syntax(raw.len() + 1, "missing time-point count"))?;
                n = Some(ctx.int(*tok, "a time-point count")?);
            }
            "t1" | "t2" | "t3" | "mh" | "mt" => {
                let n = n.ok_or_else(|| ctx.semantic("constraint before `tp` record"))?;
                let k = kind.expect("kind precedes records").1;
                match (first, k) {
                    ("t1" | "t2" | "t3", DocKind::Rdtn) => {}
                    ("t1", _) => {
                        return Err(ctx.semantic(
                            "t1 record in a hytn document (use a two-node hyperarc)",
                        ))
                    }
                    ("t2" | "t3", DocKind::HytnBlend) => {}
                    ("t2" | "t3", _) => {
                        return Err(ctx.semantic(format!(
                            "{first} record not allowed in a {k} document"
                        )))
                    }
                    ("mh" | "mt", DocKind::Rdtn) => {
                        return Err(ctx.semantic("hyperarc record in an rdtn document"))
                    }
                    ("mh", DocKind::HytnTail) | ("mt", DocKind::HytnHead) => {
                        return Err(ctx.semantic(format!(
                            "{first} record contradicts the {k} orientation"
                        )))
                    }
                    ("mh" | "mt", _) => {}
                    _ => unreachable!(),
                }
                match first {
                    "t1" => {
                        if toks.len() != 4 {
                            return Err(ctx.syntax(1, "t1 takes `t1 x y w`"));
                        }
                        let x = ctx.node(toks[1], n)?;
                        let y = ctx.node(toks[2], n)?;
                        let w = ctx.weight(toks[3])?;
                        let c = T1Constraint::new(TimePointId(x), TimePointId(y), w)
                            .map_err(|e| ctx.semantic(e.to_string()))?;
                        c1.push(c);
                    }
                    "t2" => {
                        if toks.len() < 4 || !toks.len().is_multiple_of(2) {
                            return Err(ctx.syntax(1, "t2 takes `t2 x l1 u1 [l2 u2 ...]`"));
                        }
                        let x = ctx.node(toks[1], n)?;
                        let mut intervals = Vec::new();
                        for pair in toks[2..].chunks(2) {
                            let lo = ctx.weight(pair[0])?;
                            let hi = ctx.weight(pair[1])?;
                            intervals.push(
                                Interval::new(lo, hi).map_err(|e| ctx.semantic(e.to_string()))?,
                            );
                        }
                        let c = T2Constraint::new(TimePointId(x), &intervals)
                            .map_err(|e| ctx.semantic(e.to_string()))?;
                        c2.push(c);
                    }
                    "t3" => {
                        if toks.len() != 7 {
                            return Err(ctx.syntax(1, "t3 takes `t3 x l1 u1 y l2 u2`"));
                        }
                        let x = ctx.node(toks[1], n)?;
                        let l1 = ctx.weight(toks[2])?;
                        let u1 = ctx.weight(toks[3])?;
                        let y = ctx.node(toks[4], n)?;
                        let l2 = ctx.weight(toks[5])?;
                        let u2 = ctx.weight(toks[6])?;
                        let iv1 = Interval::new(l1, u1).map_err(|e| ctx.semantic(e.to_string()))?;
                        let iv2 = Interval::new(l2, u2).map_err(|e| ctx.semantic(e.to_string()))?;
                        let c = T3Constraint::new((TimePointId(x), iv1), (TimePointId(y), iv2))
                            .map_err(|e| ctx.semantic(e.to_string()))?;
                        c3.push(c);
                    }
                    "mh" | "mt" => {
                        if toks.len() < 4 || !toks.len().is_multiple_of(2) {
                            return Err(ctx.syntax(
                                1,
                                format!("{first} takes `{first} pivot w1 v1 [w2 v2 ...]`"),
                            ));
                        }
                        let pivot = ctx.node(toks[1], n)?;
                        let mut others = Vec::new();
                        for pair in toks[2..].chunks(2) {
                            let w = ctx.weight(pair[0])?;
                            let v = ctx.node(pair[1], n)?;
                            others.push((v, w));
                        }
                        let orientation = if first == "mh" {
                            Orientation::MultiHead
                        } else {
                            Orientation::MultiTail
                        };
                        if let Some(prev) = arcs.first() {
                            if prev.orientation != orientation {
                                return Err(ctx.semantic("mixed hyperarc orientations"));
                            }
                        }
                        let arc = Hyperarc::new(orientation, pivot, others)
                            .map_err(|e| ctx.semantic(e.to_string()))?;
                        arcs.push(arc);
                    }
                    _ => unreachable!(),
                }
            }
            other => {
                return Err(ctx.syntax(toks[0].0, format!("unknown record `{other}`")));
            }
        }
    }

    let (kind_line, kind) = kind.ok_or(IoError::Semantic {
        line: 0,
        msg: "empty document: missing `kind`".to_string(),
    })?;
    let n = n.ok_or(IoError::Semantic {
        line: kind_line,
        msg: "missing `tp` record".to_string(),
    })?;
    let at_kind = |msg: String| IoError::Semantic {
        line: kind_line,
        msg,
    };
    let body = match kind {
        DocKind::Rdtn => Network::Rdtn(Rdtn::new(n, c1, c2, c3).map_err(|e| at_kind(e.to_string()))?),
        _ => Network::Hytn(Hytn::new(n, arcs, c2, c3).map_err(|e| at_kind(e.to_string()))?),
    };
    match InstanceDocument::new(kind, body, metadata) {
        Ok(doc) => Ok(doc),
        Err(IoError::Semantic { msg, .. }) => Err(at_kind(msg)),
        Err(e) => Err(e),
    }
}

fn emit_t2(out: &mut String, c: &T2Constraint) {
    write!(out, "t2 {}", c.x.0).unwrap();
    for iv in c.intervals() {
        write!(out, " {} {}", iv.lo, iv.hi).unwrap();
    }
    out.push('\n');
}

fn emit_t3(out: &mut String, c: &T3Constraint) {
    writeln!(
        out,
        "t3 {} {} {} {} {} {}",
        c.first.0 .0, c.first.1.lo, c.first.1.hi, c.second.0 .0, c.second.1.lo, c.second.1.hi
    )
    .unwrap();
}

fn emit_hyperarc(out: &mut String, a: &Hyperarc) {
    let tag = match a.orientation {
        Orientation::MultiHead => "mh",
        Orientation::MultiTail => "mt",
    };
    write!(out, "{tag} {}", a.pivot).unwrap();
    for &(v, w) in a.others() {
        write!(out, " {w} {v}").unwrap();
    }
    out.push('\n');
}

/// Serializes a document; `parse_instance` of the output reproduces it.
pub fn emit_instance(doc: &InstanceDocument) -> String {
    let mut out = String::new();
    writeln!(out, "kind {}", doc.kind).unwrap();
    for (k, v) in &doc.metadata {
        if v.is_empty() {
            writeln!(out, "meta {k}").unwrap();
        } else {
            writeln!(out, "meta {k} {v}").unwrap();
        }
    }
    match &doc.body {
        Network::Rdtn(net) => {
            writeln!(out, "tp {}", net.time_point_count()).unwrap();
            for c in net.c1() {
                writeln!(out, "t1 {} {} {}", c.x.0, c.y.0, c.w).unwrap();
            }
            for c in net.c2() {
                emit_t2(&mut out, c);
            }
            for c in net.c3() {
                emit_t3(&mut out, c);
            }
        }
        Network::Hytn(net) => {
            writeln!(out, "tp {}", net.time_point_count()).unwrap();
            for a in net.arcs() {
                emit_hyperarc(&mut out, a);
            }
            for c in net.c2() {
                emit_t2(&mut out, c);
            }
            for c in net.c3() {
                emit_t3(&mut out, c);
            }
        }
    }
    out
}

/// Parses `s <idx> <value>` lines into a total schedule over `n` points.
pub fn parse_schedule(text: &str, n: usize) -> Result<Schedule, IoError> {
    let mut values: Vec<Option<Weight>> = vec![None; n];
    for (idx, raw) in text.lines().enumerate() {
        let ctx = LineCtx { line: idx + 1 };
        let toks = tokens(raw);
        let Some(&(col0, first)) = toks.first() else {
            continue;
        };
        if first.starts_with('#') {
            continue;
        }
        if first != "s" || toks.len() != 3 {
            return Err(ctx.syntax(col0, "schedule lines are `s <idx> <value>`"));
        }
        let tp = ctx.node(toks[1], n)?;
        let v = ctx.weight(toks[2])?;
        if values[tp].is_some() {
            return Err(ctx.semantic(format!("duplicate value for time-point {tp}")));
        }
        values[tp] = Some(v);
    }
    let mut out = Vec::with_capacity(n);
    for (tp, v) in values.into_iter().enumerate() {
        match v {
            Some(v) => out.push(v),
            None => {
                return Err(IoError::Semantic {
                    line: 0,
                    msg: format!("schedule misses time-point {tp}"),
                })
            }
        }
    }
    Ok(Schedule::from_values(out))
}

pub fn emit_schedule(s: &Schedule) -> String {
    let mut out = String::new();
    for (tp, v) in s.values().iter().enumerate() {
        writeln!(out, "s {tp} {v}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_simple_rdtn() {
        let doc = parse_instance("kind rdtn\ntp 2\nt1 0 1 3\n").unwrap();
        let Network::Rdtn(net) = &doc.body else {
            panic!("rdtn body");
        };
        assert_eq!(net.time_point_count(), 2);
        assert_eq!(net.c1().len(), 1);
        assert_eq!(net.c1()[0].w, 3);
    }

    #[test]
    fn parses_figure_one_constraint() {
        let doc = parse_instance("kind rdtn\ntp 1\nt2 0 0 1 2 3 5 7 8 9\n").unwrap();
        let Network::Rdtn(net) = &doc.body else {
            panic!("rdtn body");
        };
        assert_eq!(net.c2()[0].intervals().len(), 4);
        assert_eq!(net.c2()[0].max_upper(), 9);
    }

    #[test]
    fn rejects_out_of_range_time_point() {
        let err = parse_instance("kind rdtn\ntp 2\nt1 0 1 3\nt1 0 5 1\n").unwrap_err();
        assert_eq!(
            err,
            IoError::Semantic {
                line: 4,
                msg: "time-point 5 out of range (tp 2)".to_string()
            }
        );
    }

    #[test]
    fn reports_column_on_bad_token() {
        let err = parse_instance("kind rdtn\ntp 2\nt1 0 x 3\n").unwrap_err();
        assert!(matches!(err, IoError::Syntax { line: 3, col: 6, .. }));
    }

    #[test]
    fn round_trips_documents() {
        let texts = [
            "kind rdtn\ntp 3\nt1 0 1 3\nt2 0 0 1 5 7\nt3 0 2 3 1 1 2\n",
            "kind hytn-head\ntp 3\nmh 0 -1 1 2 2\n",
            "kind hytn-blend\ntp 3\nmt 2 1 0 0 1\nt2 0 0 4\n",
        ];
        for text in texts {
            let doc = parse_instance(text).unwrap();
            let emitted = emit_instance(&doc);
            assert_eq!(parse_instance(&emitted).unwrap(), doc, "{text}");
        }
    }

    #[test]
    fn kind_body_mismatches_are_rejected() {
        assert!(parse_instance("kind rdtn\ntp 2\nmh 0 1 1\n").is_err());
        assert!(parse_instance("kind hytn-head\ntp 2\nt2 0 0 1\n").is_err());
        assert!(parse_instance("kind hytn-head\ntp 2\nmt 0 1 1\n").is_err());
        assert!(parse_instance("kind hytn-blend\ntp 2\nmh 0 1 1\nt2 0 0 1\nt3 0 0 0 1 0 0\n").is_err());
        // A blend without hyperarcs belongs in an rdtn document.
        assert!(parse_instance("kind hytn-blend\ntp 2\nt2 0 0 1\n").is_err());
    }

    #[test]
    fn schedule_round_trip_and_totality() {
        let s = parse_schedule("s 0 5\ns 1 -2\n", 2).unwrap();
        assert_eq!(s.values(), &[5, -2]);
        assert_eq!(parse_schedule(&emit_schedule(&s), 2).unwrap(), s);
        assert!(parse_schedule("s 0 5\n", 2).is_err());
        assert!(parse_schedule("s 0 5\ns 0 6\n", 1).is_err());
    }
}
