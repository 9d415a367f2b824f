use std::collections::BTreeMap;

/// Prefixes shown pairwise inequivalent, each pair with a separating suffix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NerodeReport {
    pub prefixes: Vec<String>,
    /// `(i, j) -> s` with `i < j` indexing `prefixes`: exactly one of
    /// `prefixes[i] + s`, `prefixes[j] + s` is a member.
    pub witness: BTreeMap<(usize, usize), String>,
    pub count: usize,
}

impl NerodeReport {
    /// Re-checks every witness against `membership`.
    pub fn verify(&self, membership: impl Fn(&str) -> bool) -> bool {
        let k = self.prefixes.len();
        self.count == k
            && self.witness.len() == k * k.saturating_sub(1) / 2
            && self.witness.iter().all(|(&(i, j), s)| {
                i < j
                    && membership(&format!("{}{s}", self.prefixes[i]))
                        != membership(&format!("{}{s}", self.prefixes[j]))
            })
    }
}

/// Greedily keeps each prefix whose membership pattern over `suffixes` differs
/// from every prefix kept so far. The result is maximal: every dropped prefix
/// agrees with some kept one on all suffixes.
pub fn nerode_lower_bound(membership: impl Fn(&str) -> bool, prefixes: &[String], suffixes: &[String]) -> NerodeReport {
    let mut kept: Vec<(String, Vec<bool>)> = Vec::new();
    for p in prefixes {
        let sig: Vec<bool> = suffixes.iter().map(|s| membership(&format!("{p}{s}"))).collect();
        if kept.iter().all(|(_, other)| *other != sig) {
            kept.push((p.clone(), sig));
        }
    }
    let mut witness = BTreeMap::new();
    for i in 0..kept.len() {
        for j in i + 1..kept.len() {
            let at = (0..suffixes.len())
                .find(|&x| kept[i].1[x] != kept[j].1[x])
                .expect("kept signatures are distinct");
            witness.insert((i, j), suffixes[at].clone());
        }
    }
    NerodeReport {
        count: kept.len(),
        prefixes: kept.into_iter().map(|(p, _)| p).collect(),
        witness,
    }
}
