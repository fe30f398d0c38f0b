mod support;

use llg_core::search::{direct_hits, parse_query};
use llg_core::{add_document, DesignCaseDoc, GraphError, RelationLevel, SearchParams};

fn new_doc() -> DesignCaseDoc {
    support::incremental_doc().0
}

#[test]
fn distinctive_term_finds_the_new_document() {
    let snap = support::fixture_snapshot();
    let next = add_document(&snap, new_doc()).unwrap();
    assert_eq!(next.version(), snap.version() + 1);
    let q = parse_query("whisker", &next).unwrap();
    let hits = direct_hits(&q, &next, &SearchParams::default());
    assert_eq!(hits.first().map(|h| h.doc_id.as_str()), Some("LL-100"));
    assert!(parse_query("whisker", &snap).is_err());
}

#[test]
fn l3_edges_follow_the_build_rules() {
    let snap = support::fixture_snapshot();
    let (doc, entities) = support::incremental_doc();
    let next = add_document(&snap, doc.clone()).unwrap();
    let v = support::l3_violations(&snap, &next, &doc, &entities);
    assert!(v.is_empty(), "{v:#?}");
    let l3 = next
        .edges()
        .iter()
        .filter(|e| e.level == RelationLevel::L3)
        .count();
    assert!(l3 >= 3 + entities.len());
}

#[test]
fn isolated_document_gets_no_edges() {
    let snap = support::fixture_snapshot();
    let doc = DesignCaseDoc::new("LL-101", "Qwxz vbnm.");
    let next = add_document(&snap, doc.clone()).unwrap();
    assert_eq!(next.edges().len(), snap.edges().len());
    assert!(next.node("doc:LL-101").is_some());
    assert!(support::l3_violations(&snap, &next, &doc, &[]).is_empty());
}

#[test]
fn shared_entity_gets_one_entity_edge() {
    let snap = support::fixture_snapshot();
    let doc = DesignCaseDoc::new("LL-102", "Qwxz bandgap.");
    let next = add_document(&snap, doc.clone()).unwrap();
    let e = next.edge_between("doc:LL-102", "entity:bandgap").unwrap();
    assert_eq!((e.level, e.weight), (RelationLevel::L3, 0.9));
    assert!(support::l3_violations(&snap, &next, &doc, &["bandgap"]).is_empty());
}

#[test]
fn bad_documents_are_rejected() {
    let snap = support::fixture_snapshot();
    let mut dup = new_doc();
    dup.id = "LL-001".into();
    assert!(matches!(
        add_document(&snap, dup),
        Err(GraphError::DuplicateDocument(_))
    ));
    let mut orphan = new_doc();
    orphan.project_path = vec!["P9".into()];
    assert!(matches!(
        add_document(&snap, orphan),
        Err(GraphError::InvalidDocument { .. })
    ));
    let mut empty = new_doc();
    empty.failure_description = "  ".into();
    assert!(matches!(
        add_document(&snap, empty),
        Err(GraphError::InvalidDocument { .. })
    ));
}

#[test]
fn added_documents_are_searchable_in_sequence() {
    let snap = support::fixture_snapshot();
    let first = add_document(&snap, new_doc()).unwrap();
    let mut second = DesignCaseDoc::new(
        "LL-101",
        "Solder voiding under the exposed pad caused thermal runaway.",
    );
    second.title = "Voiding".into();
    let both = add_document(&first, second).unwrap();
    assert_eq!(both.docs().len(), snap.docs().len() + 2);
    let q = parse_query("voiding", &both).unwrap();
    let hits = direct_hits(&q, &both, &SearchParams::default());
    assert_eq!(hits.first().map(|h| h.doc_id.as_str()), Some("LL-101"));
}
