use covham_cli::{parse_spec, RunResult, VerdictEntry};
use proptest::prelude::*;

fn entries() -> impl Strategy<Value = Vec<(String, String)>> {
    prop::collection::vec(("[a-z{}', ]{1,12}", "\\PC{0,16}"), 0..5)
}

proptest! {
    #[test]
    fn json_round_trip(
        exprs in entries(),
        verdicts in prop::collection::vec(("[a-z+ -]{1,10}", "[a-z]{1,8}", prop::option::of("\\PC{0,12}")), 0..4),
        warnings in prop::collection::vec("\\PC{0,20}", 0..3),
    ) {
        let mut r = RunResult::new("evolve");
        for (k, v) in exprs {
            r.expression(k, v);
        }
        for (k, v, d) in verdicts {
            r.verdict(k, VerdictEntry::new(&v, d));
        }
        for w in warnings {
            r.warn(w);
        }
        let back = RunResult::from_json(&r.to_json()).unwrap();
        prop_assert_eq!(back.render(), r.render());
        prop_assert_eq!(back, r);
    }

    #[test]
    fn arbitrary_problem_text_never_panics(text in "(\\[[a-z0-9]{0,8}\\]\n|[a-z.']{0,8} ?= ?[-a-z0-9_^*/+() ,']{0,16}\n){0,8}") {
        let _ = parse_spec(&text);
    }
}
