use super::engine::{check_runnable, judge, step};
use super::{Configuration, Event, MachineSpec, RunError, RunRecord, Symbol, Verdict};

/// Limits on an exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_branches: usize,
    /// Cells per tape; a branch that needs more is cut off.
    pub max_space: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_branches: 10_000_000,
            max_space: 64,
        }
    }
}

/// Why an exploration stopped before covering every branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    Branches,
    Space,
}

pub enum Expansion<S, O> {
    Leaf(O),
    Children(Vec<S>),
}

/// A nondeterministic process whose branches can be enumerated depth first.
pub trait Branching {
    type State;
    type Outcome;

    fn expand(&self, s: Self::State) -> Expansion<Self::State, Self::Outcome>;

    /// Largest per-tape cell count of a state.
    fn space(&self, s: &Self::State) -> usize;
}

#[derive(Debug, Clone)]
pub struct Exploration<O> {
    pub records: Vec<O>,
    pub truncated: Option<Truncation>,
}

impl<O> Exploration<O> {
    pub fn complete(&self) -> bool {
        self.truncated.is_none()
    }
}

/// Depth-first enumeration of every maximal branch; children are visited in
/// the order `expand` returns them.
pub fn explore_branches<B: Branching>(b: &B, start: B::State, bounds: Bounds) -> Exploration<B::Outcome> {
    let mut records = Vec::new();
    let mut truncated = None;
    let mut stack = vec![start];
    while let Some(s) = stack.pop() {
        if b.space(&s) > bounds.max_space {
            truncated.get_or_insert(Truncation::Space);
            continue;
        }
        match b.expand(s) {
            Expansion::Leaf(o) => {
                if records.len() == bounds.max_branches {
                    truncated = Some(Truncation::Branches);
                    break;
                }
                records.push(o);
            }
            Expansion::Children(kids) => stack.extend(kids.into_iter().rev()),
        }
    }
    Exploration { records, truncated }
}

struct MachineBranches<'a> {
    spec: &'a MachineSpec,
}

impl Branching for MachineBranches<'_> {
    type State = (Configuration, Vec<Event>);
    type Outcome = RunRecord;

    fn expand(&self, (c, events): Self::State) -> Expansion<Self::State, RunRecord> {
        let halted = self.spec.is_halt(c.state);
        let finished = c.steps as usize >= c.input_len;
        let succ = if halted || finished {
            Vec::new()
        } else {
            step(self.spec, &c)
        };
        if succ.is_empty() {
            let stuck = !halted && !finished;
            let mut events = events;
            if stuck {
                events.push(Event::Stuck { step: c.steps });
            }
            return Expansion::Leaf(RunRecord {
                verdict: judge(self.spec, &c, stuck),
                steps: c.steps,
                space: c.space(),
                events,
            });
        }
        Expansion::Children(
            succ.into_iter()
                .map(|s| {
                    let mut ev = events.clone();
                    ev.push(Event::Rule {
                        step: s.config.steps,
                        rule: s.rule,
                    });
                    if self.spec.is_halt(s.config.state) {
                        ev.push(Event::Halt { step: s.config.steps });
                    }
                    (s.config, ev)
                })
                .collect(),
        )
    }

    fn space(&self, (c, _): &Self::State) -> usize {
        c.space().into_iter().max().unwrap_or(0)
    }
}

/// Every maximal branch of a (possibly nondeterministic) real-time machine on `input`.
pub fn explore(spec: &MachineSpec, input: &[Symbol], bounds: Bounds) -> Result<Exploration<RunRecord>, RunError> {
    check_runnable(spec, input)?;
    let start = (Configuration::initial(spec, input), Vec::new());
    Ok(explore_branches(&MachineBranches { spec }, start, bounds))
}

impl Exploration<RunRecord> {
    pub fn any_accepts(&self) -> bool {
        self.records.iter().any(|r| r.verdict == Verdict::Accept)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counts down from `n`, splitting in two at every level.
    struct Binary;

    impl Branching for Binary {
        type State = u32;
        type Outcome = u32;

        fn expand(&self, s: u32) -> Expansion<u32, u32> {
            if s == 0 {
                Expansion::Leaf(0)
            } else {
                Expansion::Children(vec![s - 1, s - 1])
            }
        }

        fn space(&self, _: &u32) -> usize {
            1
        }
    }

    #[test]
    fn counts_all_leaves() {
        let e = explore_branches(&Binary, 5, Bounds::default());
        assert_eq!(e.records.len(), 32);
        assert!(e.complete());
    }

    #[test]
    fn branch_bound_is_flagged() {
        let bounds = Bounds {
            max_branches: 10,
            max_space: 64,
        };
        let e = explore_branches(&Binary, 5, bounds);
        assert_eq!(e.records.len(), 10);
        assert_eq!(e.truncated, Some(Truncation::Branches));
    }
}
