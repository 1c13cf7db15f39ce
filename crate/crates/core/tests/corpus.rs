use std::path::PathBuf;

use revnet::{catalog, parse_net, render_net, Marking, Net};

fn load(name: &str) -> (String, Net, Marking) {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../nets").join(format!("{name}.ptn"));
    let doc = parse_net(&std::fs::read_to_string(p).unwrap()).unwrap();
    (doc.name, doc.net, doc.marking)
}

#[test]
fn corpus_matches_catalog() {
    let fig1 = catalog::backward_conflict();
    let cases = [
        ("O1", catalog::o1()),
        ("N1", catalog::n1()),
        ("N2", catalog::n2()),
        ("N3", catalog::n3()),
        ("N4", catalog::n4()),
        ("N5", catalog::n5()),
        ("fig9", catalog::multi_token()),
        ("fig1", fig1.clone()),
        ("fig1_final", (fig1.0, revnet::marking(&[("d", 1)]))),
    ];
    for (name, (net, m)) in cases {
        let (doc_name, doc_net, doc_m) = load(name);
        assert_eq!(doc_name, name);
        assert_eq!(doc_net, net, "{name}");
        assert_eq!(doc_m, m, "{name}");
        let again = parse_net(&render_net(name, &doc_net, &doc_m)).unwrap();
        assert_eq!((again.net, again.marking), (doc_net, doc_m));
    }
}
