use num_bigint::BigInt;
use proptest::prelude::*;

use deltajet::base::{BaseElem, BaseRing};
use deltajet::graded;
use deltajet::ring::RingElem;
use deltajet::witt::WittVector;

fn elem(p: u64, f: usize, prec: u32, coeffs: &[i64]) -> BaseElem {
    BaseRing::new(p, f, prec).unwrap().from_coeffs(&coeffs[..f]).unwrap()
}

proptest! {
    #[test]
    fn frobenius_is_a_ring_map_lifting_the_power(a in prop::collection::vec(-500i64..500, 2), b in prop::collection::vec(-500i64..500, 2), p in prop::sample::select(vec![2u64, 3, 5])) {
        let x = elem(p, 2, 4, &a);
        let y = elem(p, 2, 4, &b);
        prop_assert_eq!(x.add(&y).frobenius(), x.frobenius().add(&y.frobenius()));
        prop_assert_eq!(x.mul(&y).frobenius(), x.frobenius().mul(&y.frobenius()));
        let q = x.ring().q();
        let d = x.delta().unwrap();
        let back = x.pow(q).add(&d.mul(&x.ring().from_int(p as i64)));
        prop_assert_eq!(back, x.frobenius());
    }

    #[test]
    fn units_invert(a in prop::collection::vec(-500i64..500, 2)) {
        let x = elem(5, 2, 3, &a);
        match x.inverse() {
            Ok(inv) => prop_assert!(x.mul(&inv).is_one()),
            Err(_) => prop_assert!(x.valuation().is_none_or(|v| v > 0)),
        }
    }

    #[test]
    fn integer_witt_ghost_is_additive(x in prop::collection::vec(-50i64..50, 3), y in prop::collection::vec(-50i64..50, 3)) {
        let wx = WittVector::new(3, 1, x.iter().map(|&v| BigInt::from(v)).collect()).unwrap();
        let wy = WittVector::new(3, 1, y.iter().map(|&v| BigInt::from(v)).collect()).unwrap();
        let s = wx.witt_add(&wy);
        prop_assert_eq!(s.clone(), wy.witt_add(&wx));
        let gs: Vec<BigInt> = wx.ghost().iter().zip(wy.ghost()).map(|(a, b)| a + b).collect();
        prop_assert_eq!(s.ghost(), gs);
        prop_assert_eq!(wx.witt_sub(&wx).coords().iter().filter(|c| !RingElem::is_zero(*c)).count(), 0);
    }

    #[test]
    fn graded_round_trip(coeffs in prop::collection::vec(0i64..343, 6), h in 1i64..7) {
        let ring = BaseRing::new(7, 1, 3).unwrap();
        let alg = graded::kummer_over_base(&ring, ring.from_int(h)).unwrap();
        let x = alg.from_coeffs(coeffs.iter().map(|&c| ring.from_int(c)).collect());
        let g = graded::tau_decompose(&x);
        prop_assert_eq!(graded::reassemble(&alg, &g).unwrap(), x.clone());
        let json = graded::GradedJson::from_graded(&g);
        prop_assert_eq!(json.to_graded(&alg).unwrap(), g);
    }
}
