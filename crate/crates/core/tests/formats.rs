use heffter::algebra::{Element, FieldSpec};
use heffter::autgroup::restricted_search;
use heffter::embedding::{build_rho0, faces_to_json, faces_to_text};
use heffter::heffter::build_rank_one_canonical;
use heffter::orderings::natural_orderings;
use heffter::PartiallyFilledArray;
use proptest::prelude::*;

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(vec![(2, 1), (5, 1), (31, 1), (3, 2), (2, 4), (7, 3), (5, 3)])
        .prop_map(|(p, e)| FieldSpec::new(p, e).unwrap())
}

fn array_strategy() -> impl Strategy<Value = PartiallyFilledArray> {
    (field_strategy(), 1usize..6, 1usize..6).prop_flat_map(|(field, m, n)| {
        let q = field.q();
        prop::collection::vec(prop::option::of(0..q), m * n).prop_map(move |cells| {
            let rows = cells.chunks(n).map(|r| r.iter().map(|c| c.map(Element)).collect()).collect();
            PartiallyFilledArray::from_rows(field.clone(), rows).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn array_text_round_trip(a in array_strategy()) {
        let text = a.to_string();
        let back: PartiallyFilledArray = text.parse().unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn field_header_round_trip(f in field_strategy()) {
        let back: FieldSpec = f.header().parse().unwrap();
        prop_assert_eq!(back, f);
    }
}

#[test]
fn header_and_cells_of_the_example() {
    let a = build_rank_one_canonical(&FieldSpec::prime(31).unwrap(), 3, 5).unwrap();
    assert_eq!(a.to_string(), "field p=31 e=1 poly=0,1\n1 2 4 8 16\n5 10 20 9 18\n25 19 7 14 28\n");
    let f = FieldSpec::new(7, 3).unwrap();
    assert_eq!(f.header(), "field p=7 e=3 poly=2,0,0,1");
}

#[test]
fn malformed_array_text_is_rejected() {
    for text in [
        "",
        "field p=31 e=1 poly=0,1\n1 2\n3\n",
        "field p=31 e=1 poly=0,1\n1 x\n",
        "field p=31 e=1 poly=0,1\n1 31\n",
        "field p=9 e=1 poly=0,1\n1\n",
        "field p=3 e=2 poly=0,0,1\n1\n",
        "p=31\n1\n",
    ] {
        assert!(text.parse::<PartiallyFilledArray>().is_err(), "{text:?}");
    }
}

#[test]
fn face_exports() {
    let field = FieldSpec::prime(31).unwrap();
    let a = build_rank_one_canonical(&field, 3, 5).unwrap();
    let emb = build_rho0(&a, &natural_orderings(&a, 0).unwrap()).unwrap();
    let text = faces_to_text(&field, emb.faces());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("field p=31 e=1 poly=0,1"));
    assert_eq!(lines.count(), 248);
    assert!(text.lines().any(|l| l == "0 2 12"));

    let json: serde_json::Value = serde_json::from_str(&faces_to_json(emb.faces())).unwrap();
    let faces = json.as_array().unwrap();
    assert_eq!(faces.len(), 248);
    assert!(faces.iter().all(|f| f["length"].as_u64().unwrap() as usize == f["vertices"].as_array().unwrap().len()));
}

#[test]
fn aut_report_json_schema() {
    let field = FieldSpec::prime(31).unwrap();
    let a = build_rank_one_canonical(&field, 3, 5).unwrap();
    let emb = build_rho0(&a, &natural_orderings(&a, 0).unwrap()).unwrap();
    let report = restricted_search(&emb, 3, 5).unwrap();
    let v = serde_json::to_value(&report).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["q", "m", "n", "aut0_plus", "aut0_minus", "total", "cyclic", "generator", "method"] {
        assert!(keys.contains(&k), "missing {k}");
    }
    assert_eq!(v["total"], 465);
    assert_eq!(v["method"], "restricted");
    let generator = v["generator"].as_str().unwrap();
    assert!(generator.starts_with('('));
    assert_eq!(serde_json::to_string(&report).unwrap(), serde_json::to_string(&restricted_search(&emb, 3, 5).unwrap()).unwrap());
}
