use super::split_subtokens;
use crate::minilang::AstNode;
use serde::{Deserialize, Serialize};

/// One pairwise syntactic relation between two terminals.
///
/// Serialized as the 3-array `[left_subtokens, path_labels, right_subtokens]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "ContextTriple", into = "ContextTriple")]
pub struct PathContext {
    pub left_subtokens: Vec<String>,
    pub path_labels: Vec<String>,
    pub right_subtokens: Vec<String>,
}

type ContextTriple = (Vec<String>, Vec<String>, Vec<String>);

impl From<ContextTriple> for PathContext {
    fn from((left_subtokens, path_labels, right_subtokens): ContextTriple) -> Self {
        Self {
            left_subtokens,
            path_labels,
            right_subtokens,
        }
    }
}

impl From<PathContext> for ContextTriple {
    fn from(c: PathContext) -> Self {
        (c.left_subtokens, c.path_labels, c.right_subtokens)
    }
}

/// Label of a path node: its kind, plus its sibling index unless it is the
/// turning point (lowest common ancestor) of the path.
pub fn node_label(node: &AstNode, is_pivot: bool) -> String {
    if is_pivot {
        node.kind.label()
    } else {
        format!("{}{}", node.kind.label(), node.sibling_index)
    }
}

/// Every terminal with its chain of ancestors (root first, leaf last).
fn terminal_chains(ast: &AstNode) -> Vec<Vec<&AstNode>> {
    fn walk<'a>(node: &'a AstNode, chain: &mut Vec<&'a AstNode>, out: &mut Vec<Vec<&'a AstNode>>) {
        chain.push(node);
        if node.is_leaf() {
            out.push(chain.clone());
        } else {
            for c in &node.children {
                walk(c, chain, out);
            }
        }
        chain.pop();
    }
    let mut out = Vec::new();
    walk(ast, &mut Vec::new(), &mut out);
    out
}

/// Extracts one path-context per unordered pair of terminals, ordered by
/// the source position of the left terminal, then the right one.
///
/// The path runs from the left terminal's node up to the lowest common
/// ancestor and down to the right terminal's node, both ends included.
pub fn extract_path_contexts(ast: &AstNode) -> Vec<PathContext> {
    let chains = terminal_chains(ast);
    let subtokens: Vec<Vec<String>> = chains
        .iter()
        .map(|c| split_subtokens(c.last().unwrap().token().unwrap_or_default()))
        .collect();
    let n = chains.len();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&chains[i], &chains[j]);
            let lca = a
                .iter()
                .zip(b.iter())
                .take_while(|(x, y)| std::ptr::eq(**x, **y))
                .count()
                - 1;
            let mut labels = Vec::with_capacity(a.len() + b.len() - 2 * lca - 1);
            labels.extend(a[lca + 1..].iter().rev().map(|n| node_label(n, false)));
            labels.push(node_label(a[lca], true));
            labels.extend(b[lca + 1..].iter().map(|n| node_label(n, false)));
            out.push(PathContext {
                left_subtokens: subtokens[i].clone(),
                path_labels: labels,
                right_subtokens: subtokens[j].clone(),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minilang::parse_source;
    use crate::minilang::random::TreeGen;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::VecDeque;

    fn contexts(src: &str) -> Vec<PathContext> {
        extract_path_contexts(&parse_source(src).unwrap())
    }

    #[test]
    fn process_url_table_paths() {
        let ctx = contexts("processURL(message, depth, baseURL, url)");
        assert_eq!(ctx.len(), 10);
        let find = |l: &str, r: &str| {
            ctx.iter()
                .find(|c| c.left_subtokens == split_subtokens(l) && c.right_subtokens == split_subtokens(r))
                .unwrap()
                .path_labels
                .clone()
        };
        assert_eq!(find("processURL", "baseURL"), ["NameExpression0", "MethodCallExpression", "NameExpression3"]);
        assert_eq!(find("processURL", "depth"), ["NameExpression0", "MethodCallExpression", "NameExpression2"]);
        assert_eq!(find("message", "depth"), ["NameExpression1", "MethodCallExpression", "NameExpression2"]);
        assert_eq!(ctx[0].left_subtokens, ["process", "url"]);
    }

    #[test]
    fn single_terminal_has_no_contexts() {
        assert!(contexts("x").is_empty());
        assert!(contexts("return x;").is_empty());
    }

    #[test]
    fn nested_paths_carry_indices_below_the_pivot() {
        let ctx = contexts("a.b(c)");
        // a / b share MemberAccess; a / c meet at the call
        assert_eq!(ctx[0].path_labels, ["NameExpression0", "MemberAccess", "NameExpression1"]);
        assert_eq!(
            ctx[1].path_labels,
            ["NameExpression0", "MemberAccess0", "MethodCallExpression", "NameExpression1"]
        );
        let ctx = contexts("if (x < 3)");
        assert_eq!(ctx[0].path_labels, ["NameExpression0", "BinaryExpression:less", "Literal1"]);
    }

    /// All-pairs shortest paths by breadth-first search over an explicit
    /// undirected graph of the tree, independent of the ancestor-chain route.
    fn bfs_oracle(ast: &AstNode) -> Vec<(String, Vec<String>, String)> {
        let mut nodes: Vec<&AstNode> = Vec::new();
        let mut adj: Vec<Vec<usize>> = Vec::new();
        let mut stack = vec![(ast, None::<usize>)];
        let mut leaves = Vec::new();
        while let Some((node, parent)) = stack.pop() {
            let id = nodes.len();
            nodes.push(node);
            adj.push(Vec::new());
            if let Some(p) = parent {
                adj[p].push(id);
                adj[id].push(p);
            }
            if node.is_leaf() {
                leaves.push(id);
            }
            for c in node.children.iter().rev() {
                stack.push((c, Some(id)));
            }
        }
        let depth_of = |target: usize| {
            // distance from the root (id 0)
            let mut dist = vec![usize::MAX; nodes.len()];
            let mut q = VecDeque::from([0]);
            dist[0] = 0;
            while let Some(u) = q.pop_front() {
                for &v in &adj[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        q.push_back(v);
                    }
                }
            }
            dist[target]
        };
        let mut out = Vec::new();
        for (li, &s) in leaves.iter().enumerate() {
            for &t in &leaves[li + 1..] {
                let mut prev = vec![usize::MAX; nodes.len()];
                prev[s] = s;
                let mut q = VecDeque::from([s]);
                while let Some(u) = q.pop_front() {
                    for &v in &adj[u] {
                        if prev[v] == usize::MAX {
                            prev[v] = u;
                            q.push_back(v);
                        }
                    }
                }
                let mut path = vec![t];
                while *path.last().unwrap() != s {
                    path.push(prev[*path.last().unwrap()]);
                }
                path.reverse();
                let pivot = *path.iter().min_by_key(|&&n| depth_of(n)).unwrap();
                let labels = path
                    .iter()
                    .map(|&n| {
                        let node = nodes[n];
                        if n == pivot {
                            node.kind.label()
                        } else {
                            format!("{}{}", node.kind.label(), node.sibling_index)
                        }
                    })
                    .collect();
                out.push((
                    nodes[s].token().unwrap().to_string(),
                    labels,
                    nodes[t].token().unwrap().to_string(),
                ));
            }
        }
        out
    }

    #[test]
    fn pair_count_and_bfs_agreement_on_random_trees() {
        let gen = TreeGen::default();
        for seed in 0..100 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ast = gen.statement(&mut rng);
            let n = ast.leaves().len();
            let got = extract_path_contexts(&ast);
            assert_eq!(got.len(), n * (n - 1) / 2);
            let want = bfs_oracle(&ast);
            assert_eq!(got.len(), want.len());
            for (g, (l, labels, r)) in got.iter().zip(&want) {
                assert_eq!(g.left_subtokens, split_subtokens(l));
                assert_eq!(&g.path_labels, labels);
                assert_eq!(g.right_subtokens, split_subtokens(r));
            }
        }
    }

    #[test]
    fn reversed_pair_path_is_the_reverse() {
        let ast = parse_source("if (a.b(c, 2) && !d) e = f;").unwrap();
        let chains = terminal_chains(&ast);
        let ctx = extract_path_contexts(&ast);
        // recompute (j, i) by walking from the right terminal instead
        let mut k = 0;
        for i in 0..chains.len() {
            for j in i + 1..chains.len() {
                let (a, b) = (&chains[j], &chains[i]);
                let lca = a.iter().zip(b.iter()).take_while(|(x, y)| std::ptr::eq(**x, **y)).count() - 1;
                let mut rev: Vec<String> = a[lca + 1..].iter().rev().map(|n| node_label(n, false)).collect();
                rev.push(node_label(a[lca], true));
                rev.extend(b[lca + 1..].iter().map(|n| node_label(n, false)));
                rev.reverse();
                assert_eq!(rev, ctx[k].path_labels);
                k += 1;
            }
        }
    }
}
