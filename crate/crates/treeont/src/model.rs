//! Domain model for tree ABoxes and finite interpretations.
//!
//! An ABox is a plain set of asserted facts (concept, role and out-degree
//! assertions) over named individuals. An [`Interpretation`] is the
//! closed-world reading of such a fact set: a finite domain plus concept and
//! role extensions. Nothing in this module infers anything; derivation lives
//! in [`crate::materialize`].
//!
//! The module also hosts the structure generators used throughout the test
//! surface (the six-node example tree, renamed forests, directed cycles, and
//! seeded random trees) and the structural validator that decides whether a
//! fact set describes a rooted directed branching tree.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Errors raised by model construction and conversion.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("node identifier must be nonempty")]
    EmptyNodeId,
    #[error("node {node} has two distinct out-degree assertions ({first} and {second})")]
    DuplicateOutDegree { node: NodeId, first: u64, second: u64 },
}

/// Name of an individual. Nonempty, totally ordered by its text; that order
/// is the single tie-breaker used everywhere determinism matters (child
/// enumeration, rank assignment, serialization order).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(name: impl Into<String>) -> Result<Self, ModelError> {
        let name = name.into();
        if name.is_empty() {
            return Err(ModelError::EmptyNodeId);
        }
        Ok(NodeId(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for NodeId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

/// Shorthand used pervasively in tests and generators; panics on the empty
/// string, which is a programming error rather than an input error.
pub fn node(name: &str) -> NodeId {
    NodeId::new(name).expect("node name must be nonempty")
}

/// Concept (class) names of the pattern vocabulary.
///
/// `Child(i)` is the indexed family used by the n-bounded pattern; indices
/// start at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    TreeNode,
    RootNode,
    LeafNode,
    NBoundedTreeNode,
    Child(u32),
    ListItem,
    FirstListItem,
    LastListItem,
}

impl Concept {
    pub fn name(&self) -> String {
        match self {
            Concept::TreeNode => "TreeNode".to_string(),
            Concept::RootNode => "RootNode".to_string(),
            Concept::LeafNode => "LeafNode".to_string(),
            Concept::NBoundedTreeNode => "nBoundedTreeNode".to_string(),
            Concept::Child(i) => format!("Child_{i}"),
            Concept::ListItem => "ListItem".to_string(),
            Concept::FirstListItem => "FirstListItem".to_string(),
            Concept::LastListItem => "LastListItem".to_string(),
        }
    }

    /// Parses a vocabulary concept name; `None` for anything outside the
    /// pattern vocabulary.
    pub fn parse(name: &str) -> Option<Concept> {
        match name {
            "TreeNode" => Some(Concept::TreeNode),
            "RootNode" => Some(Concept::RootNode),
            "LeafNode" => Some(Concept::LeafNode),
            "nBoundedTreeNode" => Some(Concept::NBoundedTreeNode),
            "ListItem" => Some(Concept::ListItem),
            "FirstListItem" => Some(Concept::FirstListItem),
            "LastListItem" => Some(Concept::LastListItem),
            _ => parse_indexed(name, "Child_").map(Concept::Child),
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Serialize for Concept {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.name())
    }
}

/// Role (object property) names of the pattern vocabulary. `RIndex(i)` is
/// the self-restriction helper role R_i of the n-bounded pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    HasChild,
    HasParent,
    HasDescendant,
    HasAncestor,
    HasSibling,
    HasNext,
    HasSuccessor,
    RIndex(u32),
    Follows,
    Precedes,
    DirectlyFollows,
    DirectlyPrecedes,
}

impl Role {
    pub fn name(&self) -> String {
        match self {
            Role::HasChild => "hasChild".to_string(),
            Role::HasParent => "hasParent".to_string(),
            Role::HasDescendant => "hasDescendant".to_string(),
            Role::HasAncestor => "hasAncestor".to_string(),
            Role::HasSibling => "hasSibling".to_string(),
            Role::HasNext => "hasNext".to_string(),
            Role::HasSuccessor => "hasSuccessor".to_string(),
            Role::RIndex(i) => format!("R_{i}"),
            Role::Follows => "follows".to_string(),
            Role::Precedes => "precedes".to_string(),
            Role::DirectlyFollows => "directlyFollows".to_string(),
            Role::DirectlyPrecedes => "directlyPrecedes".to_string(),
        }
    }

    pub fn parse(name: &str) -> Option<Role> {
        match name {
            "hasChild" => Some(Role::HasChild),
            "hasParent" => Some(Role::HasParent),
            "hasDescendant" => Some(Role::HasDescendant),
            "hasAncestor" => Some(Role::HasAncestor),
            "hasSibling" => Some(Role::HasSibling),
            "hasNext" => Some(Role::HasNext),
            "hasSuccessor" => Some(Role::HasSuccessor),
            "follows" => Some(Role::Follows),
            "precedes" => Some(Role::Precedes),
            "directlyFollows" => Some(Role::DirectlyFollows),
            "directlyPrecedes" => Some(Role::DirectlyPrecedes),
            _ => parse_indexed(name, "R_").map(Role::RIndex),
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Serialize for Role {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.name())
    }
}

/// Name of the single data role, which maps a node to its child count.
pub const OUT_DEGREE_ROLE: &str = "hasOutDegree";

fn parse_indexed(name: &str, prefix: &str) -> Option<u32> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || rest.starts_with('0') {
        return None;
    }
    let i: u32 = rest.parse().ok()?;
    (i >= 1).then_some(i)
}

/// The fixed pattern vocabulary for a configured bound `n` (`n = 0` for the
/// unbounded patterns, which use no indexed names).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Vocabulary {
    pub n_bound: u32,
}

impl Vocabulary {
    pub fn new(n_bound: u32) -> Self {
        Vocabulary { n_bound }
    }

    pub fn concepts(&self) -> Vec<Concept> {
        let mut out = vec![
            Concept::TreeNode,
            Concept::RootNode,
            Concept::LeafNode,
            Concept::NBoundedTreeNode,
            Concept::ListItem,
            Concept::FirstListItem,
            Concept::LastListItem,
        ];
        out.extend((1..=self.n_bound).map(Concept::Child));
        out
    }

    pub fn roles(&self) -> Vec<Role> {
        let mut out = vec![
            Role::HasChild,
            Role::HasParent,
            Role::HasDescendant,
            Role::HasAncestor,
            Role::HasSibling,
            Role::HasNext,
            Role::HasSuccessor,
            Role::Follows,
            Role::Precedes,
            Role::DirectlyFollows,
            Role::DirectlyPrecedes,
        ];
        out.extend((1..=self.n_bound).map(Role::RIndex));
        out
    }
}

/// One asserted fact. Ordered so that fact listings are deterministic:
/// concept assertions, then role assertions, then out-degree assertions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Fact {
    Concept(NodeId, Concept),
    Role(Role, NodeId, NodeId),
    OutDegree(NodeId, u64),
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::Concept(x, c) => write!(f, "{c}({x})"),
            Fact::Role(r, x, y) => write!(f, "{r}({x},{y})"),
            Fact::OutDegree(x, d) => write!(f, "{OUT_DEGREE_ROLE}({x},{d})"),
        }
    }
}

impl Serialize for Fact {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        match self {
            Fact::Concept(x, c) => {
                map.serialize_entry("kind", "concept")?;
                map.serialize_entry("node", x)?;
                map.serialize_entry("concept", c)?;
            }
            Fact::Role(r, x, y) => {
                map.serialize_entry("kind", "role")?;
                map.serialize_entry("role", r)?;
                map.serialize_entry("subject", x)?;
                map.serialize_entry("object", y)?;
            }
            Fact::OutDegree(x, d) => {
                map.serialize_entry("kind", "outDegree")?;
                map.serialize_entry("node", x)?;
                map.serialize_entry("value", d)?;
            }
        }
        map.end()
    }
}

/// A set of asserted facts over named individuals.
///
/// Duplicate facts collapse (sets throughout), and every individual
/// mentioned in any fact is tracked in the individual set. The one validity
/// condition not enforced structurally is out-degree single-valuedness: the
/// raw fact set may carry two distinct out-degree assertions for a node
/// (e.g. straight out of a file), and the conflict surfaces when the ABox is
/// read into an [`Interpretation`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TreeAbox {
    concepts: BTreeSet<(NodeId, Concept)>,
    roles: BTreeSet<(Role, NodeId, NodeId)>,
    out_degrees: BTreeSet<(NodeId, u64)>,
    individuals: BTreeSet<NodeId>,
}

impl TreeAbox {
    pub fn new() -> Self {
        TreeAbox::default()
    }

    pub fn assert_concept(&mut self, x: NodeId, c: Concept) {
        self.individuals.insert(x.clone());
        self.concepts.insert((x, c));
    }

    pub fn assert_role(&mut self, r: Role, x: NodeId, y: NodeId) {
        self.individuals.insert(x.clone());
        self.individuals.insert(y.clone());
        self.roles.insert((r, x, y));
    }

    pub fn assert_out_degree(&mut self, x: NodeId, degree: u64) {
        self.individuals.insert(x.clone());
        self.out_degrees.insert((x, degree));
    }

    /// Registers an individual that carries no facts of its own.
    pub fn add_individual(&mut self, x: NodeId) {
        self.individuals.insert(x);
    }

    pub fn individuals(&self) -> &BTreeSet<NodeId> {
        &self.individuals
    }

    pub fn concept_assertions(&self) -> &BTreeSet<(NodeId, Concept)> {
        &self.concepts
    }

    pub fn role_assertions(&self) -> &BTreeSet<(Role, NodeId, NodeId)> {
        &self.roles
    }

    pub fn out_degree_assertions(&self) -> &BTreeSet<(NodeId, u64)> {
        &self.out_degrees
    }

    pub fn role_pairs(&self, role: Role) -> impl Iterator<Item = (&NodeId, &NodeId)> {
        self.roles
            .iter()
            .filter(move |(r, _, _)| *r == role)
            .map(|(_, x, y)| (x, y))
    }

    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty()
    }

    pub fn fact_count(&self) -> usize {
        self.concepts.len() + self.roles.len() + self.out_degrees.len()
    }

    /// All facts in deterministic order.
    pub fn facts(&self) -> impl Iterator<Item = Fact> + '_ {
        self.concepts
            .iter()
            .map(|(x, c)| Fact::Concept(x.clone(), *c))
            .chain(self.roles.iter().map(|(r, x, y)| Fact::Role(*r, x.clone(), y.clone())))
            .chain(self.out_degrees.iter().map(|(x, d)| Fact::OutDegree(x.clone(), *d)))
    }

    /// Copy of this ABox without any assertion on the given role.
    pub fn without_role(&self, role: Role) -> TreeAbox {
        let mut out = self.clone();
        out.roles.retain(|(r, _, _)| *r != role);
        out
    }

    /// Builds the full ABox for a tree-shaped (or, degenerately, any) child
    /// edge set, following the example convention: a parentless node is
    /// asserted RootNode, a childless node LeafNode (a single node is both),
    /// any other node TreeNode; every node gets its exact out-degree; each
    /// unordered same-parent pair gets one hasSibling assertion with the
    /// lexicographically lesser node first.
    pub fn from_structure(
        nodes: impl IntoIterator<Item = NodeId>,
        child_edges: &[(NodeId, NodeId)],
    ) -> TreeAbox {
        let mut abox = TreeAbox::new();
        let mut all: BTreeSet<NodeId> = nodes.into_iter().collect();
        for (p, c) in child_edges {
            all.insert(p.clone());
            all.insert(c.clone());
        }
        let mut children: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
        let mut has_parent: BTreeSet<NodeId> = BTreeSet::new();
        for (p, c) in child_edges {
            children.entry(p.clone()).or_default().insert(c.clone());
            has_parent.insert(c.clone());
            abox.assert_role(Role::HasChild, p.clone(), c.clone());
        }
        for x in &all {
            let kids = children.get(x).map(|s| s.len()).unwrap_or(0);
            let is_root = !has_parent.contains(x);
            let is_leaf = kids == 0;
            if is_root {
                abox.assert_concept(x.clone(), Concept::RootNode);
            }
            if is_leaf {
                abox.assert_concept(x.clone(), Concept::LeafNode);
            }
            if !is_root && !is_leaf {
                abox.assert_concept(x.clone(), Concept::TreeNode);
            }
            abox.assert_out_degree(x.clone(), kids as u64);
        }
        for kids in children.values() {
            let kids: Vec<&NodeId> = kids.iter().collect();
            for i in 0..kids.len() {
                for j in (i + 1)..kids.len() {
                    abox.assert_role(Role::HasSibling, kids[i].clone(), kids[j].clone());
                }
            }
        }
        abox
    }
}

/// A finite model: domain plus concept/role extensions and the out-degree
/// map. `materialized` records whether the extensions are a fixpoint of the
/// derivation rules (set only by [`crate::materialize::materialize`]); the
/// query layer refuses to evaluate class descriptions over raw readings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Interpretation {
    domain: BTreeSet<NodeId>,
    concept_ext: BTreeMap<Concept, BTreeSet<NodeId>>,
    role_ext: BTreeMap<Role, BTreeSet<(NodeId, NodeId)>>,
    out_degree: BTreeMap<NodeId, u64>,
    materialized: bool,
}

impl Interpretation {
    pub fn new() -> Self {
        Interpretation::default()
    }

    pub fn domain(&self) -> &BTreeSet<NodeId> {
        &self.domain
    }

    pub fn add_to_domain(&mut self, x: NodeId) {
        self.domain.insert(x);
    }

    pub fn insert_concept(&mut self, c: Concept, x: NodeId) {
        self.domain.insert(x.clone());
        self.concept_ext.entry(c).or_default().insert(x);
    }

    pub fn insert_role(&mut self, r: Role, x: NodeId, y: NodeId) {
        self.domain.insert(x.clone());
        self.domain.insert(y.clone());
        self.role_ext.entry(r).or_default().insert((x, y));
    }

    pub fn set_out_degree(&mut self, x: NodeId, d: u64) {
        self.domain.insert(x.clone());
        self.out_degree.insert(x, d);
    }

    pub fn concept_ext(&self, c: Concept) -> BTreeSet<NodeId> {
        self.concept_ext.get(&c).cloned().unwrap_or_default()
    }

    pub fn concept_contains(&self, c: Concept, x: &NodeId) -> bool {
        self.concept_ext.get(&c).is_some_and(|s| s.contains(x))
    }

    pub fn role_ext(&self, r: Role) -> BTreeSet<(NodeId, NodeId)> {
        self.role_ext.get(&r).cloned().unwrap_or_default()
    }

    pub fn role_contains(&self, r: Role, x: &NodeId, y: &NodeId) -> bool {
        self.role_ext
            .get(&r)
            .is_some_and(|s| s.contains(&(x.clone(), y.clone())))
    }

    pub fn role_len(&self, r: Role) -> usize {
        self.role_ext.get(&r).map(|s| s.len()).unwrap_or(0)
    }

    pub fn out_degree(&self, x: &NodeId) -> Option<u64> {
        self.out_degree.get(x).copied()
    }

    pub fn out_degree_map(&self) -> &BTreeMap<NodeId, u64> {
        &self.out_degree
    }

    pub fn concepts_present(&self) -> impl Iterator<Item = Concept> + '_ {
        self.concept_ext.keys().copied()
    }

    pub fn roles_present(&self) -> impl Iterator<Item = Role> + '_ {
        self.role_ext.keys().copied()
    }

    pub fn is_materialized(&self) -> bool {
        self.materialized
    }

    pub(crate) fn mark_materialized(&mut self) {
        self.materialized = true;
    }

    /// All facts (domain membership excluded) in deterministic order.
    pub fn facts(&self) -> Vec<Fact> {
        let mut out = Vec::new();
        for (c, ext) in &self.concept_ext {
            for x in ext {
                out.push(Fact::Concept(x.clone(), *c));
            }
        }
        for (r, ext) in &self.role_ext {
            for (x, y) in ext {
                out.push(Fact::Role(*r, x.clone(), y.clone()));
            }
        }
        for (x, d) in &self.out_degree {
            out.push(Fact::OutDegree(x.clone(), *d));
        }
        out.sort();
        out
    }
}

/// Closed-world reading of an ABox: the domain is every mentioned
/// individual, each extension is exactly the asserted fact set, nothing is
/// inferred.
pub fn abox_to_interpretation(abox: &TreeAbox) -> Result<Interpretation, ModelError> {
    let mut interp = Interpretation::new();
    for x in abox.individuals() {
        interp.add_to_domain(x.clone());
    }
    for (x, c) in abox.concept_assertions() {
        interp.insert_concept(*c, x.clone());
    }
    for (r, x, y) in abox.role_assertions() {
        interp.insert_role(*r, x.clone(), y.clone());
    }
    for (x, d) in abox.out_degree_assertions() {
        if let Some(prev) = interp.out_degree(x) {
            if prev != *d {
                return Err(ModelError::DuplicateOutDegree {
                    node: x.clone(),
                    first: prev,
                    second: *d,
                });
            }
        }
        interp.set_out_degree(x.clone(), *d);
    }
    Ok(interp)
}

/// Inverse of [`abox_to_interpretation`]: every extension becomes an
/// assertion. Feeding a materialized interpretation back through the
/// materializer this way is how idempotence is exercised.
pub fn interpretation_to_abox(interp: &Interpretation) -> TreeAbox {
    let mut abox = TreeAbox::new();
    for x in interp.domain() {
        abox.add_individual(x.clone());
    }
    for fact in interp.facts() {
        match fact {
            Fact::Concept(x, c) => abox.assert_concept(x, c),
            Fact::Role(r, x, y) => abox.assert_role(r, x, y),
            Fact::OutDegree(x, d) => abox.assert_out_degree(x, d),
        }
    }
    abox
}

/// Verdict of the rooted-directed-branching-tree check, with witnesses.
///
/// A structure is a tree iff it has exactly one parentless node, no node
/// with two or more parents, and no node unreachable from the parentless
/// set. `arity` is the smallest n such that the structure is n-bounded
/// (i.e. the maximum child count).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructuralReport {
    pub root_count: usize,
    pub roots: BTreeSet<NodeId>,
    pub multi_parent: BTreeSet<NodeId>,
    pub unreachable: BTreeSet<NodeId>,
    pub is_tree: bool,
    pub arity: u64,
    /// Child counts of nodes that have at least one child.
    pub internal_out_degrees: BTreeSet<u64>,
}

impl StructuralReport {
    /// Every non-leaf node has exactly `n` children, and the structure is a
    /// tree.
    pub fn is_n_ary(&self, n: u64) -> bool {
        self.is_tree && self.internal_out_degrees.iter().all(|d| *d == n)
    }

    pub fn is_binary(&self) -> bool {
        self.is_n_ary(2)
    }

    /// Every node has at most `n` children, and the structure is a tree.
    pub fn is_n_bounded(&self, n: u64) -> bool {
        self.is_tree && self.arity <= n
    }
}

fn structural_report(
    nodes: &BTreeSet<NodeId>,
    child_edges: &BTreeSet<(NodeId, NodeId)>,
) -> StructuralReport {
    let mut children: BTreeMap<&NodeId, BTreeSet<&NodeId>> = BTreeMap::new();
    let mut parent_count: BTreeMap<&NodeId, usize> = BTreeMap::new();
    for (p, c) in child_edges {
        children.entry(p).or_default().insert(c);
        *parent_count.entry(c).or_default() += 1;
    }

    let roots: BTreeSet<NodeId> = nodes
        .iter()
        .filter(|x| parent_count.get(x).copied().unwrap_or(0) == 0)
        .cloned()
        .collect();
    let multi_parent: BTreeSet<NodeId> = nodes
        .iter()
        .filter(|x| parent_count.get(x).copied().unwrap_or(0) >= 2)
        .cloned()
        .collect();

    // Reachability from the parentless set; with no parentless node nothing
    // is reachable at all.
    let mut reachable: BTreeSet<&NodeId> = BTreeSet::new();
    let mut queue: VecDeque<&NodeId> = roots.iter().collect();
    for r in &queue {
        reachable.insert(r);
    }
    while let Some(x) = queue.pop_front() {
        if let Some(kids) = children.get(x) {
            for k in kids {
                if reachable.insert(k) {
                    queue.push_back(k);
                }
            }
        }
    }
    let unreachable: BTreeSet<NodeId> = nodes
        .iter()
        .filter(|x| !reachable.contains(x))
        .cloned()
        .collect();

    let internal_out_degrees: BTreeSet<u64> =
        children.values().map(|kids| kids.len() as u64).collect();
    let arity = internal_out_degrees.iter().max().copied().unwrap_or(0);
    let is_tree = roots.len() == 1 && multi_parent.is_empty() && unreachable.is_empty();

    StructuralReport {
        root_count: roots.len(),
        roots,
        multi_parent,
        unreachable,
        is_tree,
        arity,
        internal_out_degrees,
    }
}

/// Structural check of an ABox. The child graph is the union of asserted
/// hasChild edges and inverted hasParent edges.
pub fn validate(abox: &TreeAbox) -> StructuralReport {
    let mut edges: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    for (p, c) in abox.role_pairs(Role::HasChild) {
        edges.insert((p.clone(), c.clone()));
    }
    for (c, p) in abox.role_pairs(Role::HasParent) {
        edges.insert((p.clone(), c.clone()));
    }
    structural_report(abox.individuals(), &edges)
}

/// Structural check of an interpretation, over the same child graph
/// convention as [`validate`].
pub fn validate_interpretation(interp: &Interpretation) -> StructuralReport {
    let mut edges: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    for (p, c) in interp.role_ext(Role::HasChild) {
        edges.insert((p, c));
    }
    for (c, p) in interp.role_ext(Role::HasParent) {
        edges.insert((p, c));
    }
    structural_report(interp.domain(), &edges)
}

/// The six-node example ABox: root a with children b and c, b with leaves d
/// and e, c with leaf f, plus the sibling and out-degree assertions.
pub fn example_tree() -> TreeAbox {
    let mut abox = TreeAbox::new();
    let (a, b, c) = (node("a"), node("b"), node("c"));
    let (d, e, f) = (node("d"), node("e"), node("f"));

    abox.assert_concept(a.clone(), Concept::RootNode);
    abox.assert_concept(b.clone(), Concept::TreeNode);
    abox.assert_concept(c.clone(), Concept::TreeNode);
    abox.assert_concept(d.clone(), Concept::LeafNode);
    abox.assert_concept(e.clone(), Concept::LeafNode);
    abox.assert_concept(f.clone(), Concept::LeafNode);

    abox.assert_role(Role::HasChild, a.clone(), b.clone());
    abox.assert_role(Role::HasChild, a.clone(), c.clone());
    abox.assert_role(Role::HasChild, b.clone(), d.clone());
    abox.assert_role(Role::HasChild, b.clone(), e.clone());
    abox.assert_role(Role::HasChild, c.clone(), f.clone());

    abox.assert_role(Role::HasSibling, b.clone(), c.clone());
    abox.assert_role(Role::HasSibling, d.clone(), e.clone());

    abox.assert_out_degree(a, 2);
    abox.assert_out_degree(b, 2);
    abox.assert_out_degree(c, 1);
    abox.assert_out_degree(d, 0);
    abox.assert_out_degree(e, 0);
    abox.assert_out_degree(f, 0);

    abox
}

/// Disjoint union of `copies` renamed copies of [`example_tree`]; node x of
/// copy k becomes `tk_x`. The result has `copies` parentless nodes, so it is
/// deliberately not a tree.
pub fn make_forest(copies: usize) -> TreeAbox {
    assert!(copies >= 2, "a forest needs at least 2 copies");
    let base = example_tree();
    let mut abox = TreeAbox::new();
    for k in 1..=copies {
        let rename = |x: &NodeId| node(&format!("t{k}_{x}"));
        for (x, c) in base.concept_assertions() {
            abox.assert_concept(rename(x), *c);
        }
        for (r, x, y) in base.role_assertions() {
            abox.assert_role(*r, rename(x), rename(y));
        }
        for (x, d) in base.out_degree_assertions() {
            abox.assert_out_degree(rename(x), *d);
        }
    }
    abox
}

/// Directed cycle c1 → c2 → … → clen → c1. Every node has exactly one
/// parent and one child, so there is no parentless node, no root and no
/// leaf; all nodes are plain TreeNodes with out-degree 1.
pub fn make_cycle(len: usize) -> TreeAbox {
    assert!(len >= 2, "a cycle needs at least 2 nodes");
    let names: Vec<NodeId> = (1..=len).map(|i| node(&format!("c{i}"))).collect();
    let edges: Vec<(NodeId, NodeId)> = (0..len)
        .map(|i| (names[i].clone(), names[(i + 1) % len].clone()))
        .collect();
    TreeAbox::from_structure(names, &edges)
}

/// Seeded random tree on `node_count` nodes with at most `max_branching`
/// children per node, with the full assertion set of
/// [`TreeAbox::from_structure`]. Deterministic: equal arguments yield equal
/// ABoxes.
pub fn random_tree(seed: u64, node_count: usize, max_branching: usize) -> TreeAbox {
    assert!(node_count >= 1, "node_count must be at least 1");
    assert!(max_branching >= 1, "max_branching must be at least 1");
    let width = node_count.to_string().len();
    let name = |i: usize| node(&format!("n{:0width$}", i, width = width));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut child_count = vec![0usize; node_count + 1];
    // Nodes still below the branching bound, by index; index 1 is the root.
    let mut open: Vec<usize> = vec![1];
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(node_count.saturating_sub(1));
    for i in 2..=node_count {
        let slot = rng.gen_range(0..open.len());
        let parent = open[slot];
        edges.push((name(parent), name(i)));
        child_count[parent] += 1;
        if child_count[parent] >= max_branching {
            open.swap_remove(slot);
        }
        open.push(i);
    }
    TreeAbox::from_structure((1..=node_count).map(name), &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_tree_matches_published_facts() {
        let abox = example_tree();
        assert_eq!(abox.individuals().len(), 6);
        let child_pairs: Vec<_> = abox
            .role_pairs(Role::HasChild)
            .map(|(x, y)| (x.as_str().to_string(), y.as_str().to_string()))
            .collect();
        assert_eq!(
            child_pairs,
            vec![
                ("a".into(), "b".into()),
                ("a".into(), "c".into()),
                ("b".into(), "d".into()),
                ("b".into(), "e".into()),
                ("c".into(), "f".into()),
            ] as Vec<(String, String)>
        );
        assert!(abox.out_degree_assertions().contains(&(node("c"), 1)));
        assert!(abox.out_degree_assertions().contains(&(node("f"), 0)));
        let siblings: Vec<_> = abox.role_pairs(Role::HasSibling).collect();
        assert_eq!(siblings, vec![(&node("b"), &node("c")), (&node("d"), &node("e"))]);
        assert!(abox.concept_assertions().contains(&(node("a"), Concept::RootNode)));
        // Redundant typings are omitted: the root is not also typed TreeNode.
        assert!(!abox.concept_assertions().contains(&(node("a"), Concept::TreeNode)));
        assert_eq!(abox.fact_count(), 19);
    }

    #[test]
    fn example_interpretation_has_expected_extensions() {
        let interp = abox_to_interpretation(&example_tree()).unwrap();
        assert_eq!(interp.domain().len(), 6);
        assert_eq!(interp.role_len(Role::HasChild), 5);
        assert!(!interp.is_materialized());
    }

    #[test]
    fn empty_abox_yields_empty_interpretation() {
        let interp = abox_to_interpretation(&TreeAbox::new()).unwrap();
        assert!(interp.domain().is_empty());
        assert!(interp.facts().is_empty());
    }

    #[test]
    fn random_tree_has_edge_count_one_less_than_nodes() {
        let abox = random_tree(1, 50, 4);
        let interp = abox_to_interpretation(&abox).unwrap();
        assert_eq!(interp.domain().len(), 50);
        assert_eq!(interp.role_len(Role::HasChild), 49);
    }

    #[test]
    fn duplicate_out_degree_is_rejected_at_reading() {
        let mut abox = example_tree();
        abox.assert_out_degree(node("c"), 3);
        let err = abox_to_interpretation(&abox).unwrap_err();
        assert_eq!(
            err,
            ModelError::DuplicateOutDegree { node: node("c"), first: 1, second: 3 }
        );
    }

    #[test]
    fn forest_has_one_parentless_node_per_copy() {
        let abox = make_forest(2);
        assert_eq!(abox.individuals().len(), 12);
        let report = validate(&abox);
        assert_eq!(report.root_count, 2);
        assert!(!report.is_tree);
        assert!(report.multi_parent.is_empty());
        assert!(report.unreachable.is_empty());

        let three = make_forest(3);
        assert_eq!(three.individuals().len(), 18);
        assert_eq!(three.role_pairs(Role::HasChild).count(), 15);
    }

    #[test]
    fn cycle_has_no_parentless_node() {
        let abox = make_cycle(3);
        let report = validate(&abox);
        assert_eq!(report.root_count, 0);
        assert!(!report.is_tree);
        assert_eq!(report.unreachable.len(), 3);
        for x in abox.individuals() {
            let parents = abox.role_pairs(Role::HasChild).filter(|(_, c)| *c == x).count();
            assert_eq!(parents, 1);
            assert!(abox.concept_assertions().contains(&(x.clone(), Concept::TreeNode)));
            assert!(abox.out_degree_assertions().contains(&(x.clone(), 1)));
        }

        let two = make_cycle(2);
        assert_eq!(two.individuals().len(), 2);
        assert_eq!(two.role_pairs(Role::HasChild).count(), 2);
    }

    #[test]
    fn single_node_tree_is_root_and_leaf() {
        let abox = random_tree(99, 1, 5);
        let x = abox.individuals().iter().next().unwrap().clone();
        assert!(abox.concept_assertions().contains(&(x.clone(), Concept::RootNode)));
        assert!(abox.concept_assertions().contains(&(x.clone(), Concept::LeafNode)));
        assert!(abox.out_degree_assertions().contains(&(x, 0)));
    }

    #[test]
    fn random_trees_validate_and_are_deterministic() {
        let a = random_tree(7, 200, 3);
        let report = validate(&a);
        assert!(report.is_tree);
        assert!(report.arity <= 3);
        let b = random_tree(7, 200, 3);
        assert_eq!(a, b);
    }

    #[test]
    fn example_tree_report() {
        let report = validate(&example_tree());
        assert!(report.is_tree);
        assert_eq!(report.root_count, 1);
        assert_eq!(report.arity, 2);
        // Node c has a single child, so the tree is not binary.
        assert!(!report.is_binary());
        assert!(report.is_n_bounded(2));
        assert!(!report.is_n_bounded(1));
    }

    #[test]
    fn vocabulary_names_round_trip() {
        for c in Vocabulary::new(4).concepts() {
            assert_eq!(Concept::parse(&c.name()), Some(c));
        }
        for r in Vocabulary::new(4).roles() {
            assert_eq!(Role::parse(&r.name()), Some(r));
        }
        assert_eq!(Concept::parse("hasFriend"), None);
        assert_eq!(Concept::parse("Child_0"), None);
        assert_eq!(Role::parse("R_"), None);
    }

    #[test]
    fn validate_reads_has_parent_inverses() {
        let mut abox = TreeAbox::new();
        abox.assert_role(Role::HasParent, node("b"), node("a"));
        let report = validate(&abox);
        assert!(report.is_tree);
        assert_eq!(report.roots.iter().next().unwrap().as_str(), "a");
    }
}
