use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::Symbol;

/// Head movement of one tape in one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Move {
    L,
    R,
    N,
}

impl Move {
    pub fn delta(self) -> i64 {
        match self {
            Move::L => -1,
            Move::R => 1,
            Move::N => 0,
        }
    }

    pub fn parse(token: &str) -> Option<Move> {
        match token {
            "L" => Some(Move::L),
            "R" => Some(Move::R),
            "N" => Some(Move::N),
            _ => None,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Move::L => "L",
            Move::R => "R",
            Move::N => "N",
        };
        f.write_str(c)
    }
}

/// How a finished run is judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AcceptanceMode {
    /// Accept the moment the halt state is entered, whatever the tapes hold.
    HaltState,
    /// After the whole input is consumed: accepting state and all work tapes blank.
    FinalStateEmptyStorage,
}

impl AcceptanceMode {
    pub fn parse(token: &str) -> Option<Self> {
        match token {
            "halt" => Some(AcceptanceMode::HaltState),
            "final-empty" => Some(AcceptanceMode::FinalStateEmptyStorage),
            _ => None,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            AcceptanceMode::HaltState => "halt",
            AcceptanceMode::FinalStateEmptyStorage => "final-empty",
        }
    }
}

/// Index into [`MachineSpec::states`]; the halt state (if any) is `states().len()`.
pub type StateId = usize;

/// One tuple of the transition relation.
///
/// Field order follows the tuple shape `(state, reads) -> (state', moves, writes)`.
/// Input-related fields are `None` for machines without an input tape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionRule {
    pub from: StateId,
    pub read_input: Option<Symbol>,
    pub read_work: Vec<Symbol>,
    pub to: StateId,
    pub move_input: Option<Move>,
    pub move_work: Vec<Move>,
    pub write_input: Option<Symbol>,
    pub write_work: Vec<Symbol>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("missing `{0}` header")]
    MissingHeader(&'static str),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("symbol `{symbol}` is not in the {alphabet} alphabet")]
    UnknownSymbol { symbol: Symbol, alphabet: &'static str },
    #[error("rule has {found} work-tape {field}, machine has {expected} work tapes")]
    Arity {
        field: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("duplicate source {0} in a deterministic machine")]
    DuplicateSource(String),
    #[error("halt state `{0}` must not also be listed among the states")]
    HaltIsState(String),
    #[error("rule reads the input tape but the machine has none")]
    NoInputTape,
    #[error("rule does not read the input tape but the machine has one")]
    MissingInputFields,
    #[error("work alphabet must contain the blank `#`")]
    NoBlank,
    #[error("machine needs at least one work tape")]
    NoWorkTapes,
    #[error("{0}")]
    Syntax(String),
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<SpecError>,
    },
}

impl SpecError {
    pub fn at_line(self, line: Option<usize>) -> SpecError {
        match line {
            Some(line) => SpecError::AtLine {
                line,
                source: Box::new(self),
            },
            None => self,
        }
    }

    /// Line number if the error came from a machine file.
    pub fn line(&self) -> Option<usize> {
        match self {
            SpecError::AtLine { line, .. } => Some(*line),
            _ => None,
        }
    }
}

/// A rule written with state names, before validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleDef {
    pub from: String,
    pub read_input: Option<Symbol>,
    pub read_work: Vec<Symbol>,
    pub to: String,
    pub move_input: Option<Move>,
    pub move_work: Vec<Move>,
    pub write_input: Option<Symbol>,
    pub write_work: Vec<Symbol>,
    /// Source line, when loaded from a file.
    pub line: Option<usize>,
}

/// Unvalidated machine description; [`MachineBuilder::build`] checks every invariant.
#[derive(Debug, Clone, Default)]
pub struct MachineBuilder {
    pub name: String,
    pub states: Vec<String>,
    pub initial: Option<String>,
    pub halt: Option<String>,
    pub accepting: Vec<String>,
    /// `None` for machines without an input tape.
    pub input_alphabet: Option<Vec<Symbol>>,
    pub work_alphabet: Vec<Symbol>,
    pub num_work_tapes: usize,
    pub mode: Option<AcceptanceMode>,
    pub nondeterministic: bool,
    pub rules: Vec<RuleDef>,
}

impl MachineBuilder {
    pub fn new(name: &str) -> Self {
        MachineBuilder {
            name: name.to_string(),
            ..Default::default()
        }
    }

    pub fn build(self) -> Result<MachineSpec, SpecError> {
        if self.num_work_tapes == 0 {
            return Err(SpecError::NoWorkTapes);
        }
        if !self.work_alphabet.contains(&'#') {
            return Err(SpecError::NoBlank);
        }
        let initial_name = self.initial.clone().ok_or(SpecError::MissingHeader("initial"))?;
        let mode = self.mode.ok_or(SpecError::MissingHeader("mode"))?;
        if let Some(h) = &self.halt {
            if self.states.contains(h) {
                return Err(SpecError::HaltIsState(h.clone()));
            }
        }
        let lookup = |name: &str| -> Result<StateId, SpecError> {
            if let Some(i) = self.states.iter().position(|s| s == name) {
                return Ok(i);
            }
            if self.halt.as_deref() == Some(name) {
                return Ok(self.states.len());
            }
            Err(SpecError::UnknownState(name.to_string()))
        };
        let source_state = |name: &str| -> Result<StateId, SpecError> {
            self.states
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| SpecError::UnknownState(name.to_string()))
        };
        let initial = source_state(&initial_name)?;
        let mut accepting = Vec::new();
        for a in &self.accepting {
            accepting.push(lookup(a)?);
        }
        accepting.sort_unstable();
        accepting.dedup();

        let k = self.num_work_tapes;
        let mut rules = Vec::with_capacity(self.rules.len());
        let mut sources = BTreeSet::new();
        for def in &self.rules {
            let rule = self
                .compile_rule(def, k, &source_state, &lookup)
                .map_err(|e| e.at_line(def.line))?;
            let key = (rule.from, rule.read_input, rule.read_work.clone());
            if !sources.insert(key) && !self.nondeterministic {
                let src = format!(
                    "({}, {}, {})",
                    def.from,
                    def.read_input.map(String::from).unwrap_or_else(|| "-".into()),
                    def.read_work.iter().collect::<String>()
                );
                return Err(SpecError::DuplicateSource(src).at_line(def.line));
            }
            rules.push(rule);
        }

        let mut by_state = vec![Vec::new(); self.states.len()];
        for (i, r) in rules.iter().enumerate() {
            by_state[r.from].push(i);
        }
        Ok(MachineSpec {
            name: self.name,
            states: self.states,
            initial,
            halt: self.halt,
            accepting,
            input_alphabet: self.input_alphabet,
            work_alphabet: self.work_alphabet,
            num_work_tapes: k,
            rules,
            mode,
            by_state,
        })
    }

    fn compile_rule(
        &self,
        def: &RuleDef,
        k: usize,
        source_state: &dyn Fn(&str) -> Result<StateId, SpecError>,
        lookup: &dyn Fn(&str) -> Result<StateId, SpecError>,
    ) -> Result<TransitionRule, SpecError> {
        let from = source_state(&def.from)?;
        let to = lookup(&def.to)?;
        for (field, len) in [
            ("reads", def.read_work.len()),
            ("moves", def.move_work.len()),
            ("writes", def.write_work.len()),
        ] {
            if len != k {
                return Err(SpecError::Arity {
                    field,
                    expected: k,
                    found: len,
                });
            }
        }
        let input_fields = [
            def.read_input.is_some(),
            def.move_input.is_some(),
            def.write_input.is_some(),
        ];
        match &self.input_alphabet {
            None if input_fields.iter().any(|b| *b) => return Err(SpecError::NoInputTape),
            Some(_) if !input_fields.iter().all(|b| *b) => return Err(SpecError::MissingInputFields),
            _ => {}
        }
        if let Some(alpha) = &self.input_alphabet {
            for sym in [def.read_input, def.write_input].into_iter().flatten() {
                if !alpha.contains(&sym) {
                    return Err(SpecError::UnknownSymbol {
                        symbol: sym,
                        alphabet: "input",
                    });
                }
            }
        }
        for sym in def.read_work.iter().chain(&def.write_work) {
            if !self.work_alphabet.contains(sym) {
                return Err(SpecError::UnknownSymbol {
                    symbol: *sym,
                    alphabet: "work",
                });
            }
        }
        Ok(TransitionRule {
            from,
            read_input: def.read_input,
            read_work: def.read_work.clone(),
            to,
            move_input: def.move_input,
            move_work: def.move_work.clone(),
            write_input: def.write_input,
            write_work: def.write_work.clone(),
        })
    }
}

/// A validated multi-tape machine: states, alphabets, transition relation,
/// initial and halt states, accepting set and acceptance mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineSpec {
    name: String,
    states: Vec<String>,
    initial: StateId,
    halt: Option<String>,
    accepting: Vec<StateId>,
    input_alphabet: Option<Vec<Symbol>>,
    work_alphabet: Vec<Symbol>,
    num_work_tapes: usize,
    rules: Vec<TransitionRule>,
    mode: AcceptanceMode,
    by_state: Vec<Vec<usize>>,
}

impl MachineSpec {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    /// Id of the halt state, if the machine has one.
    pub fn halt(&self) -> Option<StateId> {
        self.halt.as_ref().map(|_| self.states.len())
    }

    pub fn is_halt(&self, state: StateId) -> bool {
        state == self.states.len()
    }

    pub fn state_name(&self, state: StateId) -> &str {
        match self.states.get(state) {
            Some(name) => name,
            None => self.halt.as_deref().unwrap_or("h"),
        }
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states
            .iter()
            .position(|s| s == name)
            .or_else(|| (self.halt.as_deref() == Some(name)).then_some(self.states.len()))
    }

    pub fn is_accepting(&self, state: StateId) -> bool {
        self.accepting.binary_search(&state).is_ok()
    }

    pub fn accepting(&self) -> &[StateId] {
        &self.accepting
    }

    pub fn input_alphabet(&self) -> Option<&[Symbol]> {
        self.input_alphabet.as_deref()
    }

    pub fn has_input_tape(&self) -> bool {
        self.input_alphabet.is_some()
    }

    pub fn work_alphabet(&self) -> &[Symbol] {
        &self.work_alphabet
    }

    pub fn num_work_tapes(&self) -> usize {
        self.num_work_tapes
    }

    pub fn rules(&self) -> &[TransitionRule] {
        &self.rules
    }

    pub fn mode(&self) -> AcceptanceMode {
        self.mode
    }

    /// Same machine judged under another acceptance mode.
    pub fn with_mode(mut self, mode: AcceptanceMode) -> Self {
        self.mode = mode;
        self
    }

    /// Rules applicable in `state` when the heads scan `input` and `work`, in declaration order.
    pub fn matching_rules<'a>(
        &'a self,
        state: StateId,
        input: Option<Symbol>,
        work: &'a [Symbol],
    ) -> impl Iterator<Item = usize> + 'a {
        self.by_state
            .get(state)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
            .iter()
            .copied()
            .filter(move |&i| {
                let r = &self.rules[i];
                (r.read_input.is_none() || r.read_input == input) && r.read_work == work
            })
    }

    /// True iff no two rules share a `(state, input symbol, work symbols)` source.
    pub fn is_deterministic(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.rules
            .iter()
            .all(|r| seen.insert((r.from, r.read_input, r.read_work.clone())))
    }

    /// Human-readable rendering of a rule in machine-file syntax.
    pub fn describe_rule(&self, index: usize) -> String {
        let r = &self.rules[index];
        let mut out = self.state_name(r.from).to_string();
        if let Some(c) = r.read_input {
            out.push_str(&format!(" {c}"));
        }
        for c in &r.read_work {
            out.push_str(&format!(" {c}"));
        }
        out.push_str(&format!(" -> {}", self.state_name(r.to)));
        if let Some(m) = r.move_input {
            out.push_str(&format!(" {m}"));
        }
        for m in &r.move_work {
            out.push_str(&format!(" {m}"));
        }
        if let Some(c) = r.write_input {
            out.push_str(&format!(" {c}"));
        }
        for c in &r.write_work {
            out.push_str(&format!(" {c}"));
        }
        out
    }

    /// Copy of the machine with rule `index` replaced (used to build
    /// deliberately broken variants). Panics if `index` is out of range.
    pub fn with_rule(mut self, index: usize, rule: TransitionRule) -> Self {
        self.rules[index] = rule;
        self.by_state = vec![Vec::new(); self.states.len()];
        for (i, r) in self.rules.iter().enumerate() {
            self.by_state[r.from].push(i);
        }
        self
    }
}
