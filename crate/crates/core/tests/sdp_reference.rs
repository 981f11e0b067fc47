//! Frozen n = 4 instance cross-checked against three external conic solvers
//! (all agree on the optimum to better than 1e-8 relative).

use covert_irs::linalg::{frobenius_inner, hermitian_eigen, CMatrix};
use covert_irs::sdp::{solve_sdp, SdpProblem, SdpStatus};
use num_complex::Complex64;

const C: [(f64, f64); 16] = [
    (1.0288568739519013, 0.0),
    (0.12455997214714098, -0.6697169067922241),
    (1.4785025519459485, -0.311310664216239),
    (-1.0404482753009165, -0.1722120679415915),
    (0.12455997214714098, 0.6697169067922241),
    (0.06719635507109722, 0.0),
    (0.8060971955471723, -0.14090153503411265),
    (0.9967961922646948, -0.05423605390292094),
    (1.4785025519459485, 0.311310664216239),
    (0.8060971955471723, 0.14090153503411265),
    (0.6397595539314624, 0.0),
    (-0.3412050590798567, 0.18065968711808375),
    (-1.0404482753009165, 0.1722120679415915),
    (0.9967961922646948, 0.05423605390292094),
    (-0.3412050590798567, -0.18065968711808375),
    (0.8115201169815576, 0.0),
];

const A: [(f64, f64); 16] = [
    (0.21269629376239163, 0.0),
    (0.758558048587257, -0.4519250408641514),
    (-0.6369314878531577, -0.005245954851867962),
    (0.4466997624147132, -0.38394370738169253),
    (0.758558048587257, 0.4519250408641514),
    (3.665538979760197, 0.0),
    (-2.2604001209628857, -1.3720250822852487),
    (2.408887652278855, -0.4201708430113673),
    (-0.6369314878531577, 0.005245954851867962),
    (-2.2604001209628857, 1.3720250822852487),
    (1.9074579678119494, 0.0),
    (-1.3281989448272347, 1.1607593118489063),
    (0.4466997624147132, 0.38394370738169253),
    (2.408887652278855, 0.4201708430113673),
    (-1.3281989448272347, -1.1607593118489063),
    (1.6312152978412982, 0.0),
];

const B: f64 = 2.2250725617527505;
const REFERENCE_OPTIMUM: f64 = 10.073659104;

fn matrix(entries: &[(f64, f64); 16]) -> CMatrix {
    CMatrix::from_row_iterator(4, 4, entries.iter().map(|&(re, im)| Complex64::new(re, im)))
}

#[test]
fn matches_reference_solvers() {
    let a = matrix(&A);
    let sol = solve_sdp(&SdpProblem {
        objective: matrix(&C),
        ineq_constraints: vec![(a.clone(), B)],
        unit_diagonal: true,
    })
    .unwrap();
    assert_eq!(sol.status, SdpStatus::Optimal);
    assert!(
        ((sol.objective - REFERENCE_OPTIMUM) / REFERENCE_OPTIMUM).abs() < 1e-5,
        "objective {}",
        sol.objective
    );
    assert!(frobenius_inner(&a, &sol.x) <= B * (1.0 + 1e-7));
    assert!(hermitian_eigen(&sol.x).0[0] > -1e-8);
    assert!(sol.relative_gap <= 1e-6);
}
