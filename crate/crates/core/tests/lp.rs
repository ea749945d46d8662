use chowtool_core::arith::{rat, ratio};
use chowtool_core::lp::maximize;
use chowtool_core::{Error, Rational};
use proptest::prelude::*;

fn rows(r: &[(&[i64], i64)]) -> Vec<(Vec<Rational>, Rational)> {
    r.iter().map(|(a, b)| (a.iter().map(|&x| rat(x)).collect(), rat(*b))).collect()
}

#[test]
fn textbook_program() {
    let s = maximize(&[rat(3), rat(5)], &rows(&[(&[1, 0], 4), (&[0, 2], 12), (&[3, 2], 18)])).unwrap();
    assert_eq!(s.value, rat(36));
    assert_eq!(s.x, vec![rat(2), rat(6)]);
}

#[test]
fn fractional_optimum() {
    let s = maximize(&[rat(1), rat(1)], &rows(&[(&[2, 1], 1), (&[1, 2], 1)])).unwrap();
    assert_eq!(s.value, ratio(2, 3));
    assert_eq!(s.x, vec![ratio(1, 3), ratio(1, 3)]);
}

#[test]
fn degenerate_and_invalid_programs() {
    let s = maximize(&[rat(-1), rat(-2)], &rows(&[(&[1, 1], 0)])).unwrap();
    assert_eq!(s.value, rat(0));
    assert!(matches!(maximize(&[rat(1)], &rows(&[(&[-1], 3)])), Err(Error::Budget(_))));
    assert!(matches!(maximize(&[rat(1)], &rows(&[(&[1], -1)])), Err(Error::InvalidArgument(_))));
}

proptest! {
    #[test]
    fn optimum_is_feasible_and_beats_vertices(a in prop::collection::vec(prop::collection::vec(0i64..5, 3), 1..5), b in prop::collection::vec(1i64..10, 5), c in prop::collection::vec(-3i64..4, 3)) {
        let mut r: Vec<(Vec<Rational>, Rational)> = a.iter().zip(&b).map(|(row, &bi)| (row.iter().map(|&x| rat(x)).collect(), rat(bi))).collect();
        for j in 0..3 {
            let mut e = vec![rat(0); 3];
            e[j] = rat(1);
            r.push((e, rat(10)));
        }
        let cost: Vec<Rational> = c.iter().map(|&x| rat(x)).collect();
        let s = maximize(&cost, &r).unwrap();
        for (row, bi) in &r {
            let lhs: Rational = row.iter().zip(&s.x).map(|(p, q)| p * q).sum();
            prop_assert!(lhs <= *bi);
        }
        prop_assert!(s.x.iter().all(|x| *x >= rat(0)));
        let value: Rational = cost.iter().zip(&s.x).map(|(p, q)| p * q).sum();
        prop_assert_eq!(&value, &s.value);
        // every integer point of the box that is feasible scores at most the optimum
        for x in 0..=10i64 {
            for y in 0..=10i64 {
                for z in 0..=10i64 {
                    let p = [rat(x), rat(y), rat(z)];
                    if r.iter().all(|(row, bi)| row.iter().zip(&p).map(|(u, v)| u * v).sum::<Rational>() <= *bi) {
                        let v: Rational = cost.iter().zip(&p).map(|(u, v)| u * v).sum();
                        prop_assert!(v <= s.value);
                    }
                }
            }
        }
    }
}
