use super::{extract_path_contexts, PathContext};
use crate::minilang::AstNode;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

pub const MAX_CONTEXTS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Old,
    New,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Old => "old",
            Side::New => "new",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OverflowPolicy {
    Reject,
    SampleRandom(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{side} side has {count} path-contexts")]
pub struct TooManyContexts {
    pub side: Side,
    pub count: usize,
}

/// Both sides of an edit as at most `max_contexts` path-contexts each, with
/// validity masks over the fixed number of slots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditPathContexts {
    pub old_contexts: Vec<PathContext>,
    pub new_contexts: Vec<PathContext>,
    pub old_mask: Vec<bool>,
    pub new_mask: Vec<bool>,
}

impl EditPathContexts {
    pub fn side(&self, side: Side) -> &[PathContext] {
        match side {
            Side::Old => &self.old_contexts,
            Side::New => &self.new_contexts,
        }
    }

    pub fn slots(&self) -> usize {
        self.old_mask.len()
    }
}

pub fn mask_for(real: usize, slots: usize) -> Vec<bool> {
    (0..slots).map(|i| i < real).collect()
}

fn fit(
    mut contexts: Vec<PathContext>,
    side: Side,
    max: usize,
    policy: OverflowPolicy,
) -> Result<Vec<PathContext>, TooManyContexts> {
    if contexts.len() <= max {
        return Ok(contexts);
    }
    match policy {
        OverflowPolicy::Reject => Err(TooManyContexts {
            side,
            count: contexts.len(),
        }),
        OverflowPolicy::SampleRandom(seed) => {
            let salt = match side {
                Side::Old => 0,
                Side::New => 1,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt);
            let mut keep = rand::seq::index::sample(&mut rng, contexts.len(), max).into_vec();
            keep.sort_unstable();
            let mut taken: Vec<Option<PathContext>> = contexts.drain(..).map(Some).collect();
            Ok(keep.into_iter().map(|i| taken[i].take().unwrap()).collect())
        }
    }
}

/// Extracts and bounds the path-contexts of both sides of an edit.
pub fn encode_edit(
    old_ast: &AstNode,
    new_ast: &AstNode,
    max_contexts: usize,
    policy: OverflowPolicy,
) -> Result<EditPathContexts, TooManyContexts> {
    let old = fit(extract_path_contexts(old_ast), Side::Old, max_contexts, policy)?;
    let new = fit(extract_path_contexts(new_ast), Side::New, max_contexts, policy)?;
    Ok(EditPathContexts {
        old_mask: mask_for(old.len(), max_contexts),
        new_mask: mask_for(new.len(), max_contexts),
        old_contexts: old,
        new_contexts: new,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minilang::parse_source;

    fn ast(src: &str) -> AstNode {
        parse_source(src).unwrap()
    }

    /// A call with `n - 1` arguments has `n` terminals.
    fn call_with_terminals(n: usize) -> AstNode {
        let args: Vec<String> = (1..n).map(|i| format!("a{i}")).collect();
        ast(&format!("f({})", args.join(", ")))
    }

    #[test]
    fn identity_micro_edit() {
        let e = encode_edit(&ast("x"), &ast("x"), MAX_CONTEXTS, OverflowPolicy::Reject).unwrap();
        assert!(e.old_contexts.is_empty() && e.new_contexts.is_empty());
        assert_eq!(e.old_mask, vec![false; 40]);
        assert_eq!(e.new_mask, vec![false; 40]);
    }

    #[test]
    fn masks_count_real_slots() {
        let old = call_with_terminals(5);
        let new = ast("if (a < b) c = d(e, 1);");
        let n_new = extract_path_contexts(&new).len();
        let e = encode_edit(&old, &new, MAX_CONTEXTS, OverflowPolicy::Reject).unwrap();
        assert_eq!(e.old_mask.iter().filter(|m| **m).count(), 10);
        assert_eq!(e.new_mask.iter().filter(|m| **m).count(), n_new);
        assert!(e.old_mask[..10].iter().all(|m| *m) && e.old_mask[10..].iter().all(|m| !*m));
    }

    #[test]
    fn over_forty_contexts_rejected() {
        // pair counts jump from 36 to 45, so no side has exactly 41
        let with_41 = ast("f(a, b, c, d, e, g, h, i) + 1");
        let n = extract_path_contexts(&with_41).len();
        assert_eq!(n, 45);
        let old = call_with_terminals(9);
        let err = encode_edit(&old, &with_41, 40, OverflowPolicy::Reject).unwrap_err();
        assert_eq!(err, TooManyContexts { side: Side::New, count: 45 });
        let ok = encode_edit(&old, &with_41, 45, OverflowPolicy::Reject).unwrap();
        assert_eq!(ok.new_contexts.len(), 45);
    }

    #[test]
    fn sampling_keeps_source_order_and_is_seeded() {
        let big = call_with_terminals(12);
        let all = extract_path_contexts(&big);
        let a = encode_edit(&big, &big, 40, OverflowPolicy::SampleRandom(3)).unwrap();
        let b = encode_edit(&big, &big, 40, OverflowPolicy::SampleRandom(3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.old_contexts.len(), 40);
        let mut pos = 0;
        for c in &a.old_contexts {
            pos += all[pos..].iter().position(|x| x == c).unwrap() + 1;
        }
        let c = encode_edit(&big, &big, 40, OverflowPolicy::SampleRandom(4)).unwrap();
        assert_ne!(a.old_contexts, c.old_contexts);
    }
}
