//! Named desk-scale instances used by the tests, the acceptance suite and
//! the shipped fixtures.

use num_rational::Rational64;

use crate::amalgam::AmalgamContext;
use crate::fingroup::FiniteGroup;
use crate::shelah::{Budgets, ShelahParams};

/// `L = Z₄ = ⟨a⟩`, `G = Z₆ = ⟨b⟩`, `H = Z₂` with `a² = b³`.
pub fn instance_a() -> AmalgamContext {
    let l = FiniteGroup::cyclic(4).unwrap().with_generator_label("a");
    let g = FiniteGroup::cyclic(6).unwrap().with_generator_label("b");
    let h = FiniteGroup::cyclic(2).unwrap();
    AmalgamContext::new(l, g, h, vec![0, 2], vec![0, 3]).expect("instance A")
}

/// `L = D₇`, `G = Z₄`, `H = {e, s}` identified with `{0, 2}`. Small and
/// non-abelian, with `H` malnormal in `L`.
pub fn instance_c_small() -> AmalgamContext {
    let l = FiniteGroup::dihedral(7).unwrap();
    let g = FiniteGroup::cyclic(4).unwrap();
    let h = FiniteGroup::cyclic(2).unwrap();
    AmalgamContext::new(l, g, h, vec![0, 7], vec![0, 2]).expect("instance C-small")
}

/// Two disjoint copies `L = ⟨λ⟩`, `G = ⟨μ⟩` of `Z₅₁` with `H` trivial.
pub fn instance_b() -> AmalgamContext {
    free_cyclic_pair(51)
}

/// As [`instance_b`] over `Z₃₇`.
pub fn instance_b_small() -> AmalgamContext {
    free_cyclic_pair(37)
}

fn free_cyclic_pair(m: usize) -> AmalgamContext {
    let l = FiniteGroup::cyclic(m).unwrap().with_generator_label("λ");
    let g = FiniteGroup::cyclic(m).unwrap().with_generator_label("μ");
    let h = FiniteGroup::cyclic(1).unwrap();
    AmalgamContext::new(l, g, h, vec![0], vec![0]).expect("free product")
}

/// `L = D₃₇`, `G = Z₇₄`, `H = {e, s}` identified with `{0, 37}`: a
/// nontrivial `H` with room for 18-term separated sequences on both sides.
pub fn instance_c() -> AmalgamContext {
    let l = FiniteGroup::dihedral(37).unwrap();
    let g = FiniteGroup::cyclic(74).unwrap();
    let h = FiniteGroup::cyclic(2).unwrap();
    AmalgamContext::new(l, g, h, vec![0, 37], vec![0, 37]).expect("instance C")
}

/// `aᵢ = λ^{i+1}`, `xᵢ = μ^{i+1}`, `a = λ²⁰`, `b = e`, `n = 18`, `λ = 1/7`.
pub fn params_b() -> ShelahParams {
    consecutive_params(18, Rational64::new(1, 7), 0)
}

/// `n = 16`, `λ = 1/6`, otherwise as [`params_b`].
pub fn params_b_small() -> ShelahParams {
    consecutive_params(16, Rational64::new(1, 6), 0)
}

/// As [`params_b`] with `b` the nontrivial element of `H`.
pub fn params_c() -> ShelahParams {
    consecutive_params(18, Rational64::new(1, 7), 1)
}

fn consecutive_params(n: usize, lambda: Rational64, b: usize) -> ShelahParams {
    ShelahParams {
        n,
        lambda,
        a_seq: (1..=n).collect(),
        x_seq: (1..=n).collect(),
        a: 20,
        b,
        budgets: Budgets::default(),
    }
}
