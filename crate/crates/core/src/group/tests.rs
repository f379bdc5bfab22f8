use proptest::prelude::*;

use super::*;

fn descriptors() -> Vec<GroupDescriptor> {
    vec![
        GroupDescriptor::zd(1),
        GroupDescriptor::zd(2),
        GroupDescriptor::cyclic(5),
        GroupDescriptor::lamplighter(2),
        GroupDescriptor::lamplighter(3),
        GroupDescriptor::lamplighter_z2(2),
        GroupDescriptor::iterated_wreath_z(1),
        GroupDescriptor::iterated_wreath_z(2),
        GroupDescriptor::free(2),
        GroupDescriptor::finite(s3()),
    ]
}

/// Symmetric group on three letters, as permutations of (0,1,2) in lexicographic order.
fn s3() -> FiniteGroup {
    let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    let mut table = vec![0; 36];
    for (i, a) in perms.iter().enumerate() {
        for (j, b) in perms.iter().enumerate() {
            table[i * 6 + j] = idx([a[b[0]], a[b[1]], a[b[2]]]);
        }
    }
    FiniteGroup::from_table(6, table, Some(vec![1, 2])).unwrap()
}

fn word(desc: &GroupDescriptor, picks: &[usize]) -> GroupElement {
    let gens = desc.generators();
    picks
        .iter()
        .fold(desc.identity(), |acc, &k| desc.multiply(&acc, &gens[k % gens.len()]).unwrap())
}

#[test]
fn wreath_multiplication_shifts_then_multiplies() {
    let g = GroupDescriptor::lamplighter(2);
    let x = lamplighter_element(2, &[(0, 1)]);
    let y = lamplighter_element(0, &[(0, 1)]);
    assert_eq!(g.multiply(&x, &y).unwrap(), lamplighter_element(2, &[(0, 1), (2, 1)]));

    let x = lamplighter_element(1, &[(1, 1)]);
    assert_eq!(g.multiply(&x, &y).unwrap(), lamplighter_element(1, &[]));
}

#[test]
fn free_reduction() {
    let f = GroupDescriptor::free(2);
    assert_eq!(f.multiply(&free_word(&[1]), &free_word(&[-1])).unwrap(), f.identity());
    assert_eq!(f.word_length(&free_word(&[1, 2, -1])).value, 3);
}

#[test]
fn mismatched_descriptors_are_domain_errors() {
    let g = GroupDescriptor::lamplighter(2);
    let err = g.multiply(&free_word(&[1]), &g.identity()).unwrap_err();
    assert!(matches!(err, crate::Error::Domain(_)));
}

#[test]
fn lamplighter_length_closed_form() {
    let g = GroupDescriptor::lamplighter(2);
    // Travel from 0 to -1, over to 3 and back: 2 * 4 = 8, plus two switches.
    assert_eq!(g.word_length(&lamplighter_element(0, &[(3, 1), (-1, 1)])).value, 10);
    assert_eq!(g.word_length(&g.identity()).value, 0);
    assert_eq!(g.word_length(&lamplighter_element(-3, &[(2, 1)])).value, 1 + 10 - 3);
}

#[test]
fn closed_form_matches_bfs_on_lamplighters() {
    for (desc, r) in [
        (GroupDescriptor::lamplighter(2), 9),
        (GroupDescriptor::lamplighter(3), 7),
        (GroupDescriptor::iterated_wreath_z(1), 7),
        (GroupDescriptor::iterated_wreath_z(2), 6),
    ] {
        let ball = ball_enumerate(&desc, r, DEFAULT_BALL_CAP).unwrap();
        for (x, d) in &ball.elements {
            let l = desc.word_length(x);
            assert!(l.exact);
            assert_eq!(l.value, *d, "{x} in {}", desc.family());
        }
    }
}

#[test]
fn bfs_distance_for_the_ten_switch_example() {
    let g = GroupDescriptor::lamplighter(2);
    let ball = ball_enumerate(&g, 10, DEFAULT_BALL_CAP).unwrap();
    assert_eq!(ball.distance(&lamplighter_element(0, &[(3, 1), (-1, 1)])), Some(10));
}

#[test]
fn ball_sizes() {
    let b = ball_enumerate(&GroupDescriptor::zd(1), 2, DEFAULT_BALL_CAP).unwrap();
    let mut pts: Vec<i64> = b.elements.iter().map(|(x, _)| x.as_lattice().unwrap()[0]).collect();
    pts.sort();
    assert_eq!(pts, vec![-2, -1, 0, 1, 2]);
    assert_eq!(ball_enumerate(&GroupDescriptor::free(2), 1, DEFAULT_BALL_CAP).unwrap().len(), 5);
    // e; t, t^-1, s; t^2, t^-2, ts, t^-1 s, st, st^-1
    let b = ball_enumerate(&GroupDescriptor::lamplighter(2), 2, DEFAULT_BALL_CAP).unwrap();
    assert_eq!(b.len(), 10);
    assert_eq!(b.sphere_sizes(), vec![1, 3, 6]);
}

#[test]
fn ball_cap_is_enforced() {
    let err = ball_enumerate(&GroupDescriptor::free(2), 10, 1000).unwrap_err();
    assert!(matches!(err, crate::Error::Resource { cap: 1000, .. }));
}

#[test]
fn free_ball_matches_sphere_formula() {
    let b = ball_enumerate(&GroupDescriptor::free(2), 5, DEFAULT_BALL_CAP).unwrap();
    assert_eq!(b.sphere_sizes(), vec![1, 4, 12, 36, 108, 324]);
}

#[test]
fn intervals() {
    let x = lamplighter_element(-2, &[(1, 1), (4, 1)]);
    assert_eq!(interval_i(&x).unwrap(), IntervalZ::new(1, 4));
    assert_eq!(interval_j(&x).unwrap(), IntervalZ::new(-2, 4));
    let x = lamplighter_element(3, &[]);
    assert_eq!(interval_i(&x).unwrap(), IntervalZ::Empty);
    assert_eq!(interval_j(&x).unwrap(), IntervalZ::new(0, 3));
    let x = lamplighter_element(0, &[(0, 1)]);
    assert_eq!(interval_j(&x).unwrap(), IntervalZ::point(0));
    assert!(interval_j(&free_word(&[1])).is_err());
}

#[test]
fn surrogate_length_is_flagged() {
    let g = GroupDescriptor::lamplighter_z2(2);
    let gens = g.generators();
    let x = g.multiply(&gens[4], &gens[0]).unwrap();
    let l = g.word_length(&x);
    assert!(!l.exact);
    assert_eq!(l.value, 2);
    assert!(g.word_length(&gens[0]).exact);
}

#[test]
fn surrogate_is_an_upper_bound_on_z2() {
    let g = GroupDescriptor::lamplighter_z2(2);
    let ball = ball_enumerate(&g, 6, DEFAULT_BALL_CAP).unwrap();
    for (x, d) in &ball.elements {
        assert!(g.word_length(x).value >= *d);
    }
}

#[test]
fn display_and_parse_round_trip() {
    for desc in descriptors() {
        for picks in [vec![], vec![0, 3, 1, 5, 2], vec![4, 4, 0, 1, 1, 3]] {
            let x = word(&desc, &picks);
            let s = x.to_string();
            assert_eq!(parse_element(&desc, &s).unwrap(), x, "{s}");
        }
    }
    let g = GroupDescriptor::lamplighter(2);
    assert_eq!(parse_element(&g, "(2)[0:1,2:1]").unwrap(), lamplighter_element(2, &[(0, 1), (2, 1)]));
    assert!(parse_element(&g, "(2)[0:1,0:1]").is_err());
    assert!(parse_element(&g, "(2)[0:5]").is_err());
    let f = GroupDescriptor::free(2);
    assert_eq!(parse_element(&f, "+1-2+2").unwrap(), free_word(&[1]));
}

#[test]
fn finite_table_validation() {
    assert!(FiniteGroup::from_table(2, vec![0, 1, 1, 1], None).is_err());
    assert!(FiniteGroup::from_table(6, s3_table_broken(), None).is_err());
    assert_eq!(s3().length(3), 2);
    assert_eq!(s3().length(5), 3);
}

fn s3_table_broken() -> Vec<usize> {
    let mut t: Vec<usize> = (0..36).map(|k| (k / 6 + k % 6) % 6).collect();
    t[7] = 3;
    t
}

proptest! {
    #[test]
    fn associativity(d in 0usize..10, a in prop::collection::vec(0usize..16, 0..8),
                     b in prop::collection::vec(0usize..16, 0..8), c in prop::collection::vec(0usize..16, 0..8)) {
        let desc = &descriptors()[d];
        let (x, y, z) = (word(desc, &a), word(desc, &b), word(desc, &c));
        let l = desc.multiply(&desc.multiply(&x, &y).unwrap(), &z).unwrap();
        let r = desc.multiply(&x, &desc.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn inverses(d in 0usize..10, a in prop::collection::vec(0usize..16, 0..10)) {
        let desc = &descriptors()[d];
        let x = word(desc, &a);
        let xi = desc.inverse(&x).unwrap();
        prop_assert_eq!(desc.multiply(&x, &xi).unwrap(), desc.identity());
        prop_assert_eq!(desc.multiply(&xi, &x).unwrap(), desc.identity());
        desc.check(&x).unwrap();
    }

    #[test]
    fn length_is_inverse_invariant_and_subadditive(d in 0usize..10, a in prop::collection::vec(0usize..16, 0..10),
                                                   b in prop::collection::vec(0usize..16, 0..10)) {
        let desc = &descriptors()[d];
        let (x, y) = (word(desc, &a), word(desc, &b));
        let lx = desc.word_length(&x);
        if lx.exact {
            prop_assert_eq!(lx.value, desc.word_length(&desc.inverse(&x).unwrap()).value);
            prop_assert!(lx.value <= a.len() as u64);
        }
        let lxy = desc.word_length(&desc.multiply(&x, &y).unwrap());
        let ly = desc.word_length(&y);
        if lx.exact && ly.exact && lxy.exact {
            prop_assert!(lxy.value <= lx.value + ly.value);
        }
    }

    #[test]
    fn j_contains_i_origin_and_base(a in prop::collection::vec(0usize..3, 0..20)) {
        let desc = GroupDescriptor::lamplighter(2);
        let x = word(&desc, &a);
        let i = interval_i(&x).unwrap();
        let j = interval_j(&x).unwrap();
        prop_assert!(j.contains_interval(&i));
        prop_assert!(j.contains(0));
        prop_assert!(j.contains(x.as_wreath().unwrap().base[0]));
    }
}
