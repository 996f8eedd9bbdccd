//! Newick tree text.
//!
//! Accepted grammar (whitespace between tokens is ignored, `[...]` comments
//! are skipped, a `:length` suffix after any subtree is parsed and
//! discarded):
//!
//! ```text
//! tree    := subtree ";"
//! subtree := label | "(" subtree ("," subtree)* ")" label?
//! ```
//!
//! Unlabeled internal nodes get synthesized identifiers `_n1`, `_n2`, … in
//! pre-order; to keep those collision-free, source labels must not start
//! with `_`. Quoted labels and NEXUS framing are out of scope.
//!
//! All error offsets are 0-based byte offsets into the input.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{node, validate, NodeId, StructuralReport, TreeAbox};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewickError {
    #[error("unbalanced parentheses at byte {offset}")]
    UnbalancedParentheses { offset: usize },
    #[error("empty subtree at byte {offset}")]
    EmptySubtree { offset: usize },
    #[error("duplicate label {label:?} at byte {offset}")]
    DuplicateLabel { offset: usize, label: String },
    #[error("trailing input after tree at byte {offset}")]
    TrailingInput { offset: usize },
    #[error("label {label:?} at byte {offset} uses the reserved \"_\" prefix")]
    ReservedLabel { offset: usize, label: String },
    #[error("expected \";\" at byte {offset}")]
    ExpectedSemicolon { offset: usize },
    #[error("malformed branch length at byte {offset}")]
    InvalidBranchLength { offset: usize },
    #[error("unexpected end of input at byte {offset}")]
    UnexpectedEnd { offset: usize },
    #[error("input is not a tree: {root_count} parentless node(s), {multi_parent} node(s) with several parents, {unreachable} unreachable node(s)")]
    NotATree { root_count: usize, multi_parent: usize, unreachable: usize },
    #[error("label {label:?} contains characters that cannot be written in Newick")]
    UnwritableLabel { label: String },
}

impl NewickError {
    fn not_a_tree(report: &StructuralReport) -> Self {
        NewickError::NotATree {
            root_count: report.root_count,
            multi_parent: report.multi_parent.len(),
            unreachable: report.unreachable.len(),
        }
    }
}

/// Whether a label round-trips: no grammar metacharacters, no whitespace,
/// no reserved prefix.
fn is_safe_label(label: &str) -> bool {
    !label.is_empty()
        && !label.starts_with('_')
        && !label
            .chars()
            .any(|ch| matches!(ch, '(' | ')' | ',' | ';' | ':' | '[' | ']') || ch.is_whitespace())
}

/// Whether a node of the parse tree had a label in the source or got a
/// synthesized one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelOrigin {
    Source,
    Synthesized,
}

#[derive(Debug, Clone)]
struct ParsedNode {
    label: Option<String>,
    label_offset: usize,
    children: Vec<ParsedNode>,
}

/// A parsed Newick tree: source text, the node structure, and a map
/// recording which identifiers came from the source.
#[derive(Debug, Clone)]
pub struct NewickDocument {
    source: String,
    root: DocNode,
    label_map: BTreeMap<NodeId, LabelOrigin>,
}

#[derive(Debug, Clone)]
pub struct DocNode {
    pub id: NodeId,
    pub children: Vec<DocNode>,
}

impl NewickDocument {
    pub fn parse(text: &str) -> Result<Self, NewickError> {
        let mut parser = Parser { bytes: text.as_bytes(), pos: 0 };
        parser.skip_trivia()?;
        let root = parser.subtree()?;
        parser.skip_trivia()?;
        match parser.peek() {
            Some(b';') => parser.pos += 1,
            Some(_) => return Err(NewickError::ExpectedSemicolon { offset: parser.pos }),
            None => return Err(NewickError::UnexpectedEnd { offset: parser.pos }),
        }
        parser.skip_trivia()?;
        if parser.peek().is_some() {
            return Err(NewickError::TrailingInput { offset: parser.pos });
        }

        let mut label_map = BTreeMap::new();
        let mut counter = 0usize;
        let root = assign_ids(&root, &mut counter, &mut label_map)?;
        Ok(NewickDocument { source: text.to_string(), root, label_map })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn root(&self) -> &DocNode {
        &self.root
    }

    pub fn label_map(&self) -> &BTreeMap<NodeId, LabelOrigin> {
        &self.label_map
    }

    /// The ABox for the parsed structure, with the standard classification
    /// and sibling/out-degree assertions.
    pub fn to_abox(&self) -> TreeAbox {
        let mut nodes = Vec::new();
        let mut edges = Vec::new();
        collect(&self.root, &mut nodes, &mut edges);
        TreeAbox::from_structure(nodes, &edges)
    }
}

fn collect(n: &DocNode, nodes: &mut Vec<NodeId>, edges: &mut Vec<(NodeId, NodeId)>) {
    nodes.push(n.id.clone());
    for c in &n.children {
        edges.push((n.id.clone(), c.id.clone()));
        collect(c, nodes, edges);
    }
}

fn assign_ids(
    n: &ParsedNode,
    counter: &mut usize,
    label_map: &mut BTreeMap<NodeId, LabelOrigin>,
) -> Result<DocNode, NewickError> {
    let (id, origin) = match &n.label {
        Some(label) => (node(label), LabelOrigin::Source),
        None => {
            *counter += 1;
            (node(&format!("_n{counter}")), LabelOrigin::Synthesized)
        }
    };
    if label_map.insert(id.clone(), origin).is_some() {
        return Err(NewickError::DuplicateLabel {
            offset: n.label_offset,
            label: id.as_str().to_string(),
        });
    }
    let children = n
        .children
        .iter()
        .map(|c| assign_ids(c, counter, label_map))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DocNode { id, children })
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_trivia(&mut self) -> Result<(), NewickError> {
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_whitespace() => self.pos += 1,
                Some(b'[') => {
                    let start = self.pos;
                    while let Some(b) = self.peek() {
                        self.pos += 1;
                        if b == b']' {
                            break;
                        }
                    }
                    if self.bytes.get(self.pos - 1) != Some(&b']') {
                        return Err(NewickError::UnexpectedEnd { offset: start });
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn subtree(&mut self) -> Result<ParsedNode, NewickError> {
        self.skip_trivia()?;
        let node = match self.peek() {
            Some(b'(') => {
                let open = self.pos;
                self.pos += 1;
                let mut children = vec![self.subtree()?];
                loop {
                    self.skip_trivia()?;
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                            children.push(self.subtree()?);
                        }
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        Some(_) => {
                            return Err(NewickError::UnbalancedParentheses { offset: self.pos })
                        }
                        None => return Err(NewickError::UnbalancedParentheses { offset: open }),
                    }
                }
                self.skip_trivia()?;
                let label_offset = self.pos;
                let label = self.label_opt()?;
                ParsedNode { label, label_offset, children }
            }
            _ => {
                let label_offset = self.pos;
                match self.label_opt()? {
                    Some(label) => ParsedNode { label: Some(label), label_offset, children: vec![] },
                    None => return Err(NewickError::EmptySubtree { offset: label_offset }),
                }
            }
        };
        self.skip_trivia()?;
        if self.peek() == Some(b':') {
            self.pos += 1;
            self.branch_length()?;
        }
        Ok(node)
    }

    fn label_opt(&mut self) -> Result<Option<String>, NewickError> {
        let start = self.pos;
        while let Some(b) = self.peek() {
            if b.is_ascii_whitespace()
                || matches!(b, b'(' | b')' | b',' | b';' | b':' | b'[' | b']')
            {
                break;
            }
            self.pos += 1;
        }
        if self.pos == start {
            return Ok(None);
        }
        let label = std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("label bytes are a substring of valid UTF-8")
            .to_string();
        if label.starts_with('_') {
            return Err(NewickError::ReservedLabel { offset: start, label });
        }
        Ok(Some(label))
    }

    fn branch_length(&mut self) -> Result<(), NewickError> {
        self.skip_trivia()?;
        let start = self.pos;
        if matches!(self.peek(), Some(b'+') | Some(b'-')) {
            self.pos += 1;
        }
        let mut digits = 0usize;
        while let Some(b) = self.peek() {
            if b.is_ascii_digit() || b == b'.' {
                if b.is_ascii_digit() {
                    digits += 1;
                }
                self.pos += 1;
            } else {
                break;
            }
        }
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            self.pos += 1;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            let mut exp_digits = 0usize;
            while let Some(b) = self.peek() {
                if b.is_ascii_digit() {
                    exp_digits += 1;
                    self.pos += 1;
                } else {
                    break;
                }
            }
            if exp_digits == 0 {
                return Err(NewickError::InvalidBranchLength { offset: start });
            }
        }
        if digits == 0 {
            return Err(NewickError::InvalidBranchLength { offset: start });
        }
        Ok(())
    }
}

/// Parses Newick text into an ABox: hasChild edges plus the standard node
/// classification, out-degree and sibling assertions.
pub fn parse_newick(text: &str) -> Result<TreeAbox, NewickError> {
    Ok(NewickDocument::parse(text)?.to_abox())
}

/// Canonical Newick form of a tree ABox: children ordered by node name, all
/// nodes labeled, no branch lengths, terminated by `;`.
///
/// Fails with [`NewickError::NotATree`] when the ABox does not pass the
/// structural tree check.
pub fn write_newick(abox: &TreeAbox) -> Result<String, NewickError> {
    let report = validate(abox);
    if !report.is_tree {
        return Err(NewickError::not_a_tree(&report));
    }
    for x in abox.individuals() {
        if !is_safe_label(x.as_str()) {
            return Err(NewickError::UnwritableLabel { label: x.as_str().to_string() });
        }
    }

    let mut children: BTreeMap<&NodeId, Vec<&NodeId>> = BTreeMap::new();
    for (p, c) in abox.role_pairs(crate::model::Role::HasChild) {
        children.entry(p).or_default().push(c);
    }
    for (c, p) in abox.role_pairs(crate::model::Role::HasParent) {
        let kids = children.entry(p).or_default();
        if !kids.contains(&c) {
            kids.push(c);
        }
    }
    for kids in children.values_mut() {
        kids.sort();
    }

    let root = report.roots.iter().next().expect("tree has a root");
    let mut out = String::new();
    write_subtree(root, &children, &mut out);
    out.push(';');
    Ok(out)
}

fn write_subtree(x: &NodeId, children: &BTreeMap<&NodeId, Vec<&NodeId>>, out: &mut String) {
    if let Some(kids) = children.get(x) {
        out.push('(');
        for (i, k) in kids.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write_subtree(k, children, out);
        }
        out.push(')');
    }
    out.push_str(x.as_str());
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{example_tree, make_forest, node, random_tree, Concept};

    #[test]
    fn example_text_parses_to_example_tree() {
        let abox = parse_newick("((d,e)b,(f)c)a;").unwrap();
        assert_eq!(abox, example_tree());
    }

    #[test]
    fn branch_lengths_are_discarded() {
        let abox = parse_newick("((d:0.1,e:0.2)b,(f)c)a;").unwrap();
        assert_eq!(abox, example_tree());
        let abox = parse_newick("((d:1e-3,e)b:+4.5,(f)c:2E2)a:0;").unwrap();
        assert_eq!(abox, example_tree());
    }

    #[test]
    fn whitespace_and_comments_are_ignored() {
        let abox = parse_newick(" ( ( d , e ) b ,\n\t[a comment]( f ) c ) a ;\n").unwrap();
        assert_eq!(abox, example_tree());
    }

    #[test]
    fn single_label_is_root_and_leaf() {
        let abox = parse_newick("x;").unwrap();
        assert_eq!(abox.individuals().len(), 1);
        assert!(abox.concept_assertions().contains(&(node("x"), Concept::RootNode)));
        assert!(abox.concept_assertions().contains(&(node("x"), Concept::LeafNode)));
        assert!(abox.out_degree_assertions().contains(&(node("x"), 0)));
    }

    #[test]
    fn unlabeled_nodes_get_preorder_ids() {
        let doc = NewickDocument::parse("((a,b),(c));").unwrap();
        assert_eq!(doc.root().id, node("_n1"));
        let ids: Vec<&str> = doc.root().children.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, vec!["_n2", "_n3"]);
        assert_eq!(doc.label_map()[&node("_n1")], LabelOrigin::Synthesized);
        assert_eq!(doc.label_map()[&node("a")], LabelOrigin::Source);
    }

    #[test]
    fn unbalanced_parentheses_reported_with_offset() {
        match parse_newick("((a,b;") {
            Err(NewickError::UnbalancedParentheses { offset }) => assert_eq!(offset, 5),
            other => panic!("expected UnbalancedParentheses, got {other:?}"),
        }
        assert!(matches!(
            parse_newick("(a,b));"),
            Err(NewickError::ExpectedSemicolon { offset: 5 })
        ));
    }

    #[test]
    fn empty_subtrees_reported() {
        assert!(matches!(parse_newick("(a,)b;"), Err(NewickError::EmptySubtree { offset: 3 })));
        assert!(matches!(parse_newick("();"), Err(NewickError::EmptySubtree { offset: 1 })));
        assert!(matches!(parse_newick(""), Err(NewickError::EmptySubtree { offset: 0 })));
        assert!(matches!(parse_newick("  ;"), Err(NewickError::EmptySubtree { offset: 2 })));
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(matches!(
            parse_newick("(a,a)b;"),
            Err(NewickError::DuplicateLabel { label, .. }) if label == "a"
        ));
        assert!(matches!(
            parse_newick("(a,b)a;"),
            Err(NewickError::DuplicateLabel { label, .. }) if label == "a"
        ));
    }

    #[test]
    fn trailing_input_rejected() {
        assert!(matches!(parse_newick("a; junk"), Err(NewickError::TrailingInput { offset: 3 })));
        assert!(matches!(parse_newick("a;;"), Err(NewickError::TrailingInput { offset: 2 })));
        assert!(parse_newick("a; \n").is_ok());
    }

    #[test]
    fn reserved_prefix_rejected() {
        assert!(matches!(
            parse_newick("(_x,y)z;"),
            Err(NewickError::ReservedLabel { offset: 1, label }) if label == "_x"
        ));
    }

    #[test]
    fn missing_semicolon_reported() {
        assert!(matches!(parse_newick("a"), Err(NewickError::UnexpectedEnd { offset: 1 })));
        assert!(matches!(parse_newick("a b;"), Err(NewickError::ExpectedSemicolon { offset: 2 })));
    }

    #[test]
    fn canonical_write_of_example() {
        assert_eq!(write_newick(&example_tree()).unwrap(), "((d,e)b,(f)c)a;");
        let single = parse_newick("x;").unwrap();
        assert_eq!(write_newick(&single).unwrap(), "x;");
    }

    #[test]
    fn write_rejects_non_trees() {
        assert!(matches!(
            write_newick(&make_forest(2)),
            Err(NewickError::NotATree { root_count: 2, .. })
        ));
    }

    #[test]
    fn round_trip_is_identity_on_fact_sets() {
        for seed in 0..10 {
            let tree = random_tree(seed, 40 + seed as usize, 4);
            let text = write_newick(&tree).unwrap();
            assert_eq!(parse_newick(&text).unwrap(), tree, "seed {seed}");
        }
    }

    #[test]
    fn parse_output_always_validates() {
        for text in ["((a,b),(c,(d,e)));", "(((((x)))));", "(l1,l2,l3,l4,l5)r;"] {
            let abox = parse_newick(text).unwrap();
            assert!(validate(&abox).is_tree, "{text}");
        }
    }
}
