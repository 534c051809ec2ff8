use lindstrom_core::algebra::{brute_force_bracketings, groupoid_reachable, Languages, Magma};
use lindstrom_core::alphabet::Alphabet;
use lindstrom_core::leafauto::{leaf_count, leaf_stream, leaf_string, LeafAutomaton};
use lindstrom_core::logic::random::FormulaGen;
use lindstrom_core::logic::{
    eval, exists, instance_rank, instance_unrank, Assignment, Formula, InstanceOrder, Structure,
};
use lindstrom_core::syntax::parse_formula;
use lindstrom_core::translate::{binary_of, pad_string};
use proptest::prelude::*;

fn order() -> impl Strategy<Value = InstanceOrder> {
    prop_oneof![Just(InstanceOrder::Interleaved), Just(InstanceOrder::Concatenated)]
}

fn magma() -> impl Strategy<Value = Magma> {
    (2usize..=4)
        .prop_flat_map(|g| (Just(g), proptest::collection::vec(0..g, (g - 1) * (g - 1))))
        .prop_map(|(g, inner)| {
            let table = (0..g)
                .map(|x| {
                    (0..g)
                        .map(|y| match (x, y) {
                            (0, _) => y,
                            (_, 0) => x,
                            _ => inner[(x - 1) * (g - 1) + (y - 1)],
                        })
                        .collect()
                })
                .collect();
            Magma::new("M", (0..g).map(|x| x.to_string()).collect(), table, 0).unwrap()
        })
}

proptest! {
    #[test]
    fn unrank_inverts_rank(order in order(), k in 1usize..=4, n in 1usize..=5, seed in any::<u64>()) {
        let rank = seed % (1u64 << (n * k));
        let sets = instance_unrank(rank, k, n, order).unwrap();
        prop_assert_eq!(sets.len(), k);
        prop_assert!(sets.iter().all(|s| s.len() == n));
        prop_assert_eq!(instance_rank(&sets, order).unwrap(), rank);
    }

    #[test]
    fn rank_inverts_unrank(order in order(), sets in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 3), 1..=3)) {
        let rank = instance_rank(&sets, order).unwrap();
        prop_assert_eq!(instance_unrank(rank, sets.len(), 3, order).unwrap(), sets);
    }

    #[test]
    fn printed_formulas_parse_back(seed in any::<u64>(), depth in 1usize..=4, star in any::<bool>()) {
        let mut gen = FormulaGen::new(seed, &['a', 'b']).with_relations(&["X", "Y"]).with_depth(depth);
        let body = gen.formula(&[]);
        let f = Formula::LindSo {
            lang: "Lmod2".into(),
            order: if star { InstanceOrder::Concatenated } else { InstanceOrder::Interleaved },
            arity: 1,
            vars: vec!["X".into(), "Y".into()],
            args: vec![body],
        };
        let langs = Languages::with_builtins();
        let text = f.to_string();
        prop_assert_eq!(parse_formula(&text, &langs).unwrap(), f);
    }

    #[test]
    fn lexists_quantifier_is_exists(seed in any::<u64>(), word in "[ab]{1,5}") {
        let langs = Languages::with_builtins();
        let phi = FormulaGen::new(seed, &['a', 'b']).formula(&["x"]);
        let q = Formula::Lind { lang: "Lexists".into(), vars: vec!["x".into()], args: vec![phi.clone()] };
        let s = Structure::from_string(&Alphabet::parse("a,b").unwrap(), &word).unwrap();
        let none = Assignment::new();
        prop_assert_eq!(eval(&langs, &s, &none, &q).unwrap(), eval(&langs, &s, &none, &exists("x", phi)).unwrap());
    }

    #[test]
    fn reachable_set_matches_bracketings(m in magma(), raw in proptest::collection::vec(0usize..4, 1..=6)) {
        let word: Vec<usize> = raw.iter().map(|&x| x % m.order()).collect();
        prop_assert_eq!(groupoid_reachable(&m, &word).unwrap(), brute_force_bracketings(&m, &word, 12).unwrap());
    }

    #[test]
    fn words_decode_and_encode(word in "[xyz]{0,12}") {
        let a = Alphabet::parse("x,y,z").unwrap();
        prop_assert_eq!(a.decode(&a.encode(&word).unwrap()), word);
    }

    #[test]
    fn padded_words_have_length_n_to_the_k(word in "[ab]{1,4}", k in 1usize..=3) {
        let padded = pad_string(&word, k, '#');
        prop_assert_eq!(padded.chars().count(), word.len().pow(k as u32));
        prop_assert!(padded.starts_with(&word));
        prop_assert!(padded[word.len()..].chars().all(|c| c == '#'));
    }

    #[test]
    fn binary_expansion_round_trips(n in 1usize..1_000_000) {
        let b = binary_of(n);
        prop_assert!(b.starts_with('1'));
        prop_assert_eq!(usize::from_str_radix(&b, 2).unwrap(), n);
    }

    #[test]
    fn leaf_count_stream_and_string_agree(
        succ in proptest::collection::vec(proptest::collection::vec(0usize..3, 1..=3), 3),
        beta in proptest::collection::vec(0usize..2, 3),
        len in 0usize..=7,
    ) {
        let table: Vec<Vec<Vec<usize>>> = succ.iter().map(|s| vec![s.clone()]).collect();
        let m = LeafAutomaton::new(
            vec!["p".into(), "q".into(), "r".into()],
            Alphabet::parse("a").unwrap(),
            Alphabet::parse("1,0").unwrap(),
            0,
            table,
            beta,
        ).unwrap();
        let word = vec![0; len];
        let materialized = leaf_string(&m, &word, 1 << 16).unwrap();
        let mut streamed = Vec::new();
        leaf_stream(&m, &word, &mut |x| { streamed.push(x); true });
        prop_assert_eq!(leaf_count(&m, &word), materialized.len().into());
        prop_assert_eq!(streamed, materialized);
    }
}
