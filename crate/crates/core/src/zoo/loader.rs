use crate::tm::{AcceptanceMode, MachineBuilder, MachineSpec, Move, RuleDef, SpecError, Symbol};

/// Shipped machine files.
pub const MS_FILE: &str = include_str!("../../machines/ms.rtm");
pub const MD_FILE: &str = include_str!("../../machines/md.rtm");

fn syntax(msg: impl Into<String>, line: usize) -> SpecError {
    SpecError::Syntax(msg.into()).at_line(Some(line))
}

fn symbol(tok: &str, line: usize) -> Result<Symbol, SpecError> {
    let mut chars = tok.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(syntax(format!("`{tok}` is not a single-character symbol"), line)),
    }
}

fn symbols(toks: &[&str], line: usize) -> Result<Vec<Symbol>, SpecError> {
    toks.iter().map(|t| symbol(t, line)).collect()
}

fn moves(toks: &[&str], line: usize) -> Result<Vec<Move>, SpecError> {
    toks.iter()
        .map(|t| Move::parse(t).ok_or_else(|| syntax(format!("`{t}` is not a move (L, R or N)"), line)))
        .collect()
}

fn parse_rule(toks: &[&str], k: usize, has_input: bool, line: usize) -> Result<RuleDef, SpecError> {
    let arrow = toks
        .iter()
        .position(|t| *t == "->")
        .ok_or_else(|| syntax("rule needs `->`", line))?;
    let (lhs, rhs) = (&toks[..arrow], &toks[arrow + 1..]);
    let inp = usize::from(has_input);
    if lhs.is_empty() || rhs.is_empty() {
        return Err(syntax("rule needs a state on both sides of `->`", line));
    }
    if lhs.len() != 1 + inp + k {
        return Err(SpecError::Arity {
            field: "reads",
            expected: k,
            found: (lhs.len() - 1).saturating_sub(inp),
        }
        .at_line(Some(line)));
    }
    if rhs.len() != 1 + 2 * inp + 2 * k {
        return Err(SpecError::Arity {
            field: "moves and writes",
            expected: k,
            found: (rhs.len() - 1).saturating_sub(2 * inp) / 2,
        }
        .at_line(Some(line)));
    }
    let read_input = if has_input { Some(symbol(lhs[1], line)?) } else { None };
    let read_work = symbols(&lhs[1 + inp..], line)?;
    let mut rest = &rhs[1..];
    let move_input = if has_input {
        let m = moves(&rest[..1], line)?[0];
        rest = &rest[1..];
        Some(m)
    } else {
        None
    };
    let move_work = moves(&rest[..k], line)?;
    rest = &rest[k..];
    let write_input = if has_input {
        let s = symbol(rest[0], line)?;
        rest = &rest[1..];
        Some(s)
    } else {
        None
    };
    let write_work = symbols(rest, line)?;
    Ok(RuleDef {
        from: lhs[0].to_string(),
        read_input,
        read_work,
        to: rhs[0].to_string(),
        move_input,
        move_work,
        write_input,
        write_work,
        line: Some(line),
    })
}

/// Parses the line-oriented machine format. Lines starting with `#` are comments;
/// a `#` token elsewhere is the blank symbol.
pub fn load_machine(text: &str) -> Result<MachineSpec, SpecError> {
    let mut b = MachineBuilder::default();
    let mut named = false;
    let mut tapes = None;
    let mut rule_lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        let args = &toks[1..];
        let one = || -> Result<&str, SpecError> {
            match args {
                [a] => Ok(a),
                _ => Err(syntax(format!("`{}` takes exactly one argument", toks[0]), line)),
            }
        };
        match toks[0] {
            "machine" => {
                b.name = one()?.to_string();
                named = true;
            }
            "tapes" => {
                let k: usize = one()?
                    .parse()
                    .map_err(|_| syntax("`tapes` needs a positive integer", line))?;
                tapes = Some(k);
            }
            "mode" => {
                let m = one()?;
                b.mode = Some(
                    AcceptanceMode::parse(m)
                        .ok_or_else(|| syntax(format!("unknown mode `{m}` (halt or final-empty)"), line))?,
                );
            }
            "states" => b.states = args.iter().map(|s| s.to_string()).collect(),
            "initial" => b.initial = Some(one()?.to_string()),
            "halt" => b.halt = Some(one()?.to_string()),
            "accepting" => b.accepting = args.iter().map(|s| s.to_string()).collect(),
            "input-alphabet" => b.input_alphabet = Some(symbols(args, line)?),
            "work-alphabet" => b.work_alphabet = symbols(args, line)?,
            "nondeterministic" => b.nondeterministic = true,
            "rule" => rule_lines.push((line, toks.clone())),
            other => return Err(syntax(format!("unknown directive `{other}`"), line)),
        }
    }
    if !named {
        return Err(SpecError::MissingHeader("machine"));
    }
    let k = tapes.ok_or(SpecError::MissingHeader("tapes"))?;
    if b.states.is_empty() {
        return Err(SpecError::MissingHeader("states"));
    }
    if b.work_alphabet.is_empty() {
        return Err(SpecError::MissingHeader("work-alphabet"));
    }
    b.num_work_tapes = k;
    let has_input = b.input_alphabet.is_some();
    for (line, toks) in rule_lines {
        b.rules.push(parse_rule(&toks[1..], k, has_input, line)?);
    }
    b.build()
}
