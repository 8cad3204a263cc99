//! Seeded random targets.

use std::fmt;
use std::str::FromStr;

use elhlab_core::framework::{dllite_axioms, elh_axioms, FragmentId};
use elhlab_core::{is_tautology, Axiom, Concept, ConceptName, Reasoner, RoleName, Signature, TBox};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest concept side the `elh` pools draw from.
const ELH_SIZE_CAP: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GenSpec {
    #[serde(with = "crate::text")]
    pub fragment: FragmentId,
    /// Concept names.
    pub sig_size: usize,
    #[serde(default)]
    pub role_count: usize,
    pub axiom_count: usize,
    #[serde(default = "one")]
    pub depth_cap: usize,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("malformed generator spec: {0}")]
    Malformed(String),
    #[error("cannot draw {requested} independent axioms for {fragment} (space holds {available})")]
    Infeasible { fragment: FragmentId, requested: usize, available: usize },
}

/// `A, B, ..., Z, A27, A28, ...`.
pub fn concept_names(n: usize) -> Vec<ConceptName> {
    (0..n)
        .map(|i| {
            let s = if i < 26 { ((b'A' + i as u8) as char).to_string() } else { format!("A{}", i + 1) };
            ConceptName::new(&s).unwrap()
        })
        .collect()
}

/// `r, s, t, u, v, w, r7, r8, ...`.
pub fn role_names(n: usize) -> Vec<RoleName> {
    const FIRST: [&str; 6] = ["r", "s", "t", "u", "v", "w"];
    (0..n)
        .map(|i| RoleName::new(&FIRST.get(i).map_or_else(|| format!("r{}", i + 1), |s| s.to_string())).unwrap())
        .collect()
}

impl GenSpec {
    pub fn signature(&self) -> Signature {
        Signature::new(concept_names(self.sig_size), role_names(self.role_count))
    }

    fn check(&self) -> Result<(), GenError> {
        let bad = |m: &str| Err(GenError::Malformed(m.into()));
        if self.sig_size == 0 {
            return bad("sig must be at least 1");
        }
        if matches!(self.fragment, FragmentId::ToyAtomic | FragmentId::ToyConj) && self.role_count > 0 {
            return bad("toy fragments have no roles");
        }
        if self.fragment == FragmentId::ToyConj && self.sig_size > 30 {
            return bad("toy-conj supports at most 30 names");
        }
        Ok(())
    }
}

/// `fragment=F,sig=N,roles=K,axioms=M,depth=D,seed=S`; `roles`, `depth`
/// and `seed` are optional.
impl FromStr for GenSpec {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut fragment = None;
        let (mut sig, mut roles, mut axioms, mut depth, mut seed) = (None, 0, None, 1, 0);
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) =
                part.split_once('=').ok_or_else(|| GenError::Malformed(format!("`{part}` is not key=value")))?;
            let num =
                || v.trim().parse::<u64>().map_err(|_| GenError::Malformed(format!("`{k}` needs a number, got `{v}`")));
            match k.trim() {
                "fragment" => {
                    fragment = Some(
                        v.trim()
                            .parse()
                            .map_err(|e: elhlab_core::framework::FrameworkError| GenError::Malformed(e.to_string()))?,
                    )
                }
                "sig" => sig = Some(num()? as usize),
                "roles" => roles = num()? as usize,
                "axioms" => axioms = Some(num()? as usize),
                "depth" => depth = num()? as usize,
                "seed" => seed = num()?,
                other => return Err(GenError::Malformed(format!("unknown key `{other}`"))),
            }
        }
        let missing = |k: &str| GenError::Malformed(format!("missing `{k}`"));
        Ok(GenSpec {
            fragment: fragment.ok_or_else(|| missing("fragment"))?,
            sig_size: sig.ok_or_else(|| missing("sig"))?,
            role_count: roles,
            axiom_count: axioms.ok_or_else(|| missing("axioms"))?,
            depth_cap: depth,
            seed,
        })
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "fragment={},sig={},roles={},axioms={},depth={},seed={}",
            self.fragment, self.sig_size, self.role_count, self.axiom_count, self.depth_cap, self.seed
        )
    }
}

/// Adds `a` unless `t` already entails it.
fn push_independent(t: &mut TBox, a: Axiom) -> bool {
    if is_tautology(&a) || Reasoner::new(t).entails(&a) {
        return false;
    }
    t.insert(a)
}

/// A random TBox of `axiom_count` axioms, none entailed by the others
/// drawn before it, over [`GenSpec::signature`]. Deterministic per spec.
pub fn generate_target(spec: &GenSpec) -> Result<TBox, GenError> {
    spec.check()?;
    let sig = spec.signature();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let names: Vec<ConceptName> = sig.concept_names.iter().cloned().collect();
    let roles: Vec<RoleName> = sig.role_names.iter().cloned().collect();
    let infeasible =
        |available| GenError::Infeasible { fragment: spec.fragment, requested: spec.axiom_count, available };
    let mut t = TBox::new();
    if spec.fragment == FragmentId::ToyConj {
        let n = names.len();
        let available = ((1usize << n) - 1) * n;
        if spec.axiom_count > available || (spec.axiom_count > 0 && n < 2) {
            return Err(infeasible(if n < 2 { 0 } else { available }));
        }
        for _ in 0..spec.axiom_count * 200 {
            if t.len() == spec.axiom_count {
                break;
            }
            let k = rng.random_range(1..=(n - 1).min(3));
            let mut shuffled = names.clone();
            shuffled.shuffle(&mut rng);
            let lhs = Concept::and(shuffled[..k].iter().cloned().map(Concept::Name));
            let rhs = Concept::Name(shuffled[rng.random_range(k..n)].clone());
            push_independent(&mut t, Axiom::ci(lhs, rhs));
        }
        return if t.len() == spec.axiom_count { Ok(t) } else { Err(infeasible(available)) };
    }
    let mut pool: Vec<Axiom> = match spec.fragment {
        FragmentId::ToyAtomic => names
            .iter()
            .flat_map(|a| names.iter().map(move |b| Axiom::ci(Concept::Name(a.clone()), Concept::Name(b.clone()))))
            .collect(),
        FragmentId::DlLite => dllite_axioms(&names, &roles),
        FragmentId::Elh | FragmentId::ElhIq => elh_axioms(&sig, spec.depth_cap, ELH_SIZE_CAP),
        FragmentId::ToyConj => unreachable!(),
    };
    let available = pool.len();
    if spec.axiom_count > available {
        return Err(infeasible(available));
    }
    pool.sort();
    pool.shuffle(&mut rng);
    for a in pool {
        if t.len() == spec.axiom_count {
            break;
        }
        push_independent(&mut t, a);
    }
    if t.len() < spec.axiom_count {
        return Err(infeasible(available));
    }
    Ok(t)
}
