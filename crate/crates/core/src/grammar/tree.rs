use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use super::{check_step, Arrangement, Grammar, GrammarError, RuleKind};
use crate::words::Word;

/// A rule-labelled derivation. `yield_` is the tuple derived at this node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTree {
    pub rule: RuleKind,
    pub arrangement: Arrangement,
    pub children: Vec<DerivationTree>,
    pub yield_: Vec<Word>,
}

impl DerivationTree {
    pub fn axiom(g: &Grammar) -> DerivationTree {
        DerivationTree {
            rule: RuleKind::Axiom,
            arrangement: Arrangement::axiom(g.arity()),
            children: Vec::new(),
            yield_: g.axiom_yield(),
        }
    }

    /// Applies `arrangement` to the children's yields to build the node.
    pub fn node(
        rule: RuleKind,
        arrangement: Arrangement,
        children: Vec<DerivationTree>,
        n: u8,
    ) -> Result<DerivationTree, GrammarError> {
        let yields: Vec<Vec<Word>> = children.iter().map(|c| c.yield_.clone()).collect();
        let yield_ = arrangement.apply(n, &yields)?;
        Ok(DerivationTree {
            rule,
            arrangement,
            children,
            yield_,
        })
    }

    /// Wraps a tuple derivation in the start rule.
    pub fn start(child: DerivationTree) -> DerivationTree {
        let arity = child.yield_.len();
        let n = child.yield_[0].dimension();
        DerivationTree::node(RuleKind::Start, Arrangement::start(arity), vec![child], n)
            .expect("start arrangement binds every component")
    }

    pub fn size(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(DerivationTree::size)
            .sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(DerivationTree::depth)
            .max()
            .unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tree serialization cannot fail")
    }

    pub fn from_json(text: &str, n: u8) -> Result<DerivationTree, GrammarError> {
        let raw: RawNode =
            serde_json::from_str(text).map_err(|e| GrammarError::Malformed(e.to_string()))?;
        raw.into_tree(n)
    }
}

#[derive(Serialize)]
struct NodeOut<'a> {
    rule: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    axis: Option<u8>,
    arrangement: &'a Arrangement,
    children: &'a [DerivationTree],
    #[serde(rename = "yield")]
    yield_: &'a [Word],
}

impl Serialize for DerivationTree {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        NodeOut {
            rule: self.rule.name(),
            axis: match self.rule {
                RuleKind::PairInsert(axis) => Some(axis),
                _ => None,
            },
            arrangement: &self.arrangement,
            children: &self.children,
            yield_: &self.yield_,
        }
        .serialize(serializer)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNode {
    rule: String,
    #[serde(default)]
    axis: Option<u8>,
    arrangement: Arrangement,
    children: Vec<RawNode>,
    #[serde(rename = "yield")]
    yield_: Vec<String>,
}

impl RawNode {
    fn into_tree(self, n: u8) -> Result<DerivationTree, GrammarError> {
        let malformed = |m: &str| GrammarError::Malformed(m.to_string());
        let rule = match (self.rule.as_str(), self.axis) {
            ("axiom", None) => RuleKind::Axiom,
            ("start", None) => RuleKind::Start,
            ("merge", None) => RuleKind::Merge,
            ("pair", Some(axis)) => RuleKind::PairInsert(axis),
            ("pair", None) => return Err(malformed("pair node without axis")),
            (_, Some(_)) => return Err(malformed("axis on a non-pair node")),
            (other, None) => {
                return Err(GrammarError::Malformed(format!("unknown rule {other:?}")))
            }
        };
        let yield_ = self
            .yield_
            .iter()
            .map(|s| Word::parse(s, n).map_err(|e| GrammarError::Malformed(e.to_string())))
            .collect::<Result<_, _>>()?;
        let children = self
            .children
            .into_iter()
            .map(|c| c.into_tree(n))
            .collect::<Result<_, _>>()?;
        Ok(DerivationTree {
            rule,
            arrangement: self.arrangement,
            children,
            yield_,
        })
    }
}

/// Where and why [`verify_tree`] rejected a tree. `path` lists child indices from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeError {
    pub path: Vec<usize>,
    pub reason: String,
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {:?}: {}", self.path, self.reason)
    }
}

impl std::error::Error for TreeError {}

/// Checks every node of `tree` against `g`: the arrangement belongs to the node's
/// rule family and reproduces the node's yield from its children's yields.
pub fn verify_tree(tree: &DerivationTree, g: &Grammar) -> Result<(), TreeError> {
    let mut path = Vec::new();
    verify_node(tree, g, true, &mut path)
}

fn verify_node(
    node: &DerivationTree,
    g: &Grammar,
    is_root: bool,
    path: &mut Vec<usize>,
) -> Result<(), TreeError> {
    let fail = |path: &Vec<usize>, reason: String| {
        Err(TreeError {
            path: path.clone(),
            reason,
        })
    };
    if node.rule == RuleKind::Start && !is_root {
        return fail(path, "start rule below the root".into());
    }
    let Some(family) = g.family(node.rule) else {
        return fail(path, format!("no rule family {:?}", node.rule));
    };
    if node.children.len() != node.rule.child_count() {
        return fail(
            path,
            format!(
                "{} node has {} children, expected {}",
                node.rule.name(),
                node.children.len(),
                node.rule.child_count()
            ),
        );
    }
    if node.yield_.len() != family.head_arity {
        return fail(
            path,
            format!(
                "yield has {} components, expected {}",
                node.yield_.len(),
                family.head_arity
            ),
        );
    }
    if let Some(w) = node.yield_.iter().find(|w| w.dimension() != g.dimension()) {
        return fail(path, format!("word {w} has dimension {}", w.dimension()));
    }
    if !family.contains(&node.arrangement) {
        return fail(
            path,
            format!(
                "arrangement {} is not a {} rule",
                node.arrangement,
                node.rule.name()
            ),
        );
    }
    for (i, child) in node.children.iter().enumerate() {
        if child.rule == RuleKind::Start {
            path.push(i);
            return fail(path, "start rule below the root".into());
        }
    }
    let yields: Vec<Vec<Word>> = node.children.iter().map(|c| c.yield_.clone()).collect();
    match check_step(&node.yield_, &node.arrangement, &yields) {
        Ok(true) => {}
        Ok(false) => {
            return fail(
                path,
                format!(
                    "arrangement {} does not produce {:?}",
                    node.arrangement, node.yield_
                ),
            )
        }
        Err(e) => return fail(path, e.to_string()),
    }
    for (i, child) in node.children.iter().enumerate() {
        path.push(i);
        verify_node(child, g, false, path)?;
        path.pop();
    }
    Ok(())
}

/// Number of PairInsert nodes, the only rule that emits letters.
pub fn count_pair_inserts(tree: &DerivationTree) -> usize {
    let own = usize::from(matches!(tree.rule, RuleKind::PairInsert(_)));
    own + tree.children.iter().map(count_pair_inserts).sum::<usize>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::Token;

    fn tok(s: &str) -> Vec<Token> {
        s.split_whitespace().map(|t| t.parse().unwrap()).collect()
    }

    /// PairInsert(a: t1 = a x1, t2 = x2 A) over PairInsert(b: t1 = b x1, t2 = x2 B) over Axiom.
    fn ab_ba() -> DerivationTree {
        let g = Grammar::o2();
        let inner = DerivationTree::node(
            RuleKind::PairInsert(2),
            Arrangement::from_groups(&[tok("b x1"), tok("x2 B")]),
            vec![DerivationTree::axiom(&g)],
            2,
        )
        .unwrap();
        DerivationTree::node(
            RuleKind::PairInsert(1),
            Arrangement::from_groups(&[tok("a x1"), tok("x2 A")]),
            vec![inner],
            2,
        )
        .unwrap()
    }

    #[test]
    fn axiom_only_tree_verifies() {
        let g = Grammar::o2();
        assert_eq!(verify_tree(&DerivationTree::axiom(&g), &g), Ok(()));
        let g3 = Grammar::o3();
        assert_eq!(verify_tree(&DerivationTree::axiom(&g3), &g3), Ok(()));
    }

    #[test]
    fn chain_tree_verifies() {
        let g = Grammar::o2();
        let t = ab_ba();
        assert_eq!(
            t.yield_,
            vec![Word::parse("ab", 2).unwrap(), Word::parse("BA", 2).unwrap()]
        );
        assert_eq!(verify_tree(&t, &g), Ok(()));
        assert_eq!(count_pair_inserts(&t), 2);
        let s = DerivationTree::start(t);
        assert_eq!(s.yield_, vec![Word::parse("abBA", 2).unwrap()]);
        assert_eq!(verify_tree(&s, &g), Ok(()));
    }

    #[test]
    fn wrong_arrangement_is_reported_at_the_root() {
        let g = Grammar::o2();
        let mut t = ab_ba();
        t.arrangement = Arrangement::from_groups(&[tok("x1 a"), tok("x2 A")]);
        let err = verify_tree(&t, &g).unwrap_err();
        assert_eq!(err.path, Vec::<usize>::new());
    }

    #[test]
    fn failures_report_the_node_path() {
        let g = Grammar::o2();
        let mut t = ab_ba();
        t.children[0].yield_[0] = Word::parse("a", 2).unwrap();
        let err = verify_tree(&t, &g).unwrap_err();
        // the parent sees a child yield it cannot reproduce
        assert_eq!(err.path, Vec::<usize>::new());
        let mut t = ab_ba();
        t.children[0].children[0].yield_[1] = Word::parse("aA", 2).unwrap();
        assert!(verify_tree(&t, &g).is_err());
    }

    #[test]
    fn start_below_root_is_rejected() {
        let g = Grammar::o2();
        let s = DerivationTree::start(DerivationTree::axiom(&g));
        let bogus = DerivationTree {
            rule: RuleKind::PairInsert(1),
            arrangement: Arrangement::from_groups(&[tok("a x1"), tok("x2 A")]),
            children: vec![s],
            yield_: vec![Word::parse("a", 2).unwrap(), Word::parse("A", 2).unwrap()],
        };
        assert_eq!(verify_tree(&bogus, &g).unwrap_err().path, vec![0]);
    }

    #[test]
    fn json_shape_and_round_trip() {
        let g = Grammar::o2();
        let leaf = DerivationTree::axiom(&g);
        assert_eq!(
            leaf.to_json(),
            r#"{"rule":"axiom","arrangement":{"tokens":[],"splits":[0]},"children":[],"yield":["",""]}"#
        );
        let t = DerivationTree::start(ab_ba());
        let json = t.to_json();
        assert!(
            json.starts_with(r#"{"rule":"start","arrangement":{"tokens":["x1","x2"],"splits":[]}"#)
        );
        assert!(json.contains(
            r#""rule":"pair","axis":1,"arrangement":{"tokens":["a","x1","x2","A"],"splits":[2]}"#
        ));
        let back = DerivationTree::from_json(&json, 2).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn malformed_json_is_rejected() {
        assert!(DerivationTree::from_json(r#"{"rule":"pair","arrangement":{"tokens":[],"splits":[0]},"children":[],"yield":["",""]}"#, 2).is_err());
        assert!(DerivationTree::from_json(r#"{"rule":"axiom","arrangement":{"tokens":[],"splits":[0]},"children":[],"yield":["z",""]}"#, 2).is_err());
    }
}
