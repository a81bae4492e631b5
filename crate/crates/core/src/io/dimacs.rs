//! DIMACS CNF input for the 3-SAT gadget path.

use super::{CnfFormula, IoError};

/// Parses standard DIMACS CNF: `c` comment lines, one `p cnf <vars>
/// <clauses>` header, then zero-terminated clauses spread over any number of
/// lines. Literal variables must stay within the declared count and the
/// clause count must match the header.
pub fn parse_dimacs_cnf(text: &str) -> Result<CnfFormula, IoError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let semantic = |msg: String| IoError::Semantic { line, msg };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(semantic("duplicate `p` header".to_string()));
            }
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(semantic("header must be `p cnf <vars> <clauses>`".to_string()));
            }
            let vars = parts[2]
                .parse::<usize>()
                .map_err(|_| semantic(format!("bad variable count `{}`", parts[2])))?;
            let count = parts[3]
                .parse::<usize>()
                .map_err(|_| semantic(format!("bad clause count `{}`", parts[3])))?;
            header = Some((vars, count));
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(semantic("clause before the `p cnf` header".to_string()));
        };
        for tok in trimmed.split_whitespace() {
            let lit = tok
                .parse::<i32>()
                .map_err(|_| semantic(format!("bad literal `{tok}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                let var = lit.unsigned_abs() as usize;
                if var > vars {
                    return Err(semantic(format!(
                        "variable {var} beyond the declared {vars}"
                    )));
                }
                current.push(lit);
            }
        }
    }

    let Some((vars, declared)) = header else {
        return Err(IoError::Semantic {
            line: 0,
            msg: "missing `p cnf` header".to_string(),
        });
    };
    if !current.is_empty() {
        return Err(IoError::Semantic {
            line: 0,
            msg: "unterminated clause at end of input".to_string(),
        });
    }
    if clauses.len() != declared {
        return Err(IoError::Semantic {
            line: 0,
            msg: format!("header declares {declared} clauses, found {}", clauses.len()),
        });
    }
    Ok(CnfFormula {
        var_count: vars,
        clauses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_unit_clause() {
        let f = parse_dimacs_cnf("p cnf 1 1\n1 0\n").unwrap();
        assert_eq!(f.var_count, 1);
        assert_eq!(f.clauses, vec![vec![1]]);
    }

    #[test]
    fn parses_two_clauses() {
        let f = parse_dimacs_cnf("c comment\np cnf 2 2\n1 -2 0\n-1 2 0\n").unwrap();
        assert_eq!(f.clauses, vec![vec![1, -2], vec![-1, 2]]);
    }

    #[test]
    fn rejects_variable_beyond_declared() {
        let err = parse_dimacs_cnf("p cnf 1 1\n1 2 0\n").unwrap_err();
        assert!(matches!(err, IoError::Semantic { line: 2, .. }));
    }

    #[test]
    fn rejects_clause_count_mismatch() {
        assert!(parse_dimacs_cnf("p cnf 1 2\n1 0\n").is_err());
        assert!(parse_dimacs_cnf("p cnf 1 1\n1\n").is_err());
    }

    #[test]
    fn clauses_may_span_lines() {
        let f = parse_dimacs_cnf("p cnf 3 1\n1\n-2 3 0\n").unwrap();
        assert_eq!(f.clauses, vec![vec![1, -2, 3]]);
    }
}
