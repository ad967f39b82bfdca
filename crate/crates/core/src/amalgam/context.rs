use crate::fingroup::{FinGroupError, FiniteGroup, SubgroupEmbedding};

use super::{AmalgamError, AmalgamWord, Side};

/// Per-factor lookup tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct FactorTables {
    /// `x = h·t` with `t` the minimal element of `Hx`: H index of `h`.
    pub(crate) right_h: Vec<u32>,
    /// Representative `t` of the right coset `Hx`.
    pub(crate) right_t: Vec<u32>,
    /// `x = u·h` with `u` the minimal element of `xH`.
    pub(crate) left_u: Vec<u32>,
    pub(crate) left_h: Vec<u32>,
    /// Right coset id of each element, dense in `0..transversal.len()`.
    pub(crate) coset: Vec<u32>,
    /// Minimal representative of each right coset, ascending.
    pub(crate) transversal: Vec<u32>,
}

impl FactorTables {
    fn build(emb: &SubgroupEmbedding) -> FactorTables {
        let sup = emb.sup();
        let n = sup.order();
        let none = u32::MAX;
        let mut right_h = vec![none; n];
        let mut right_t = vec![none; n];
        let mut left_u = vec![none; n];
        let mut left_h = vec![none; n];
        let mut coset = vec![none; n];
        let mut transversal = Vec::new();
        for x in sup.elements() {
            if right_t[x] == none {
                // x is the smallest element of Hx.
                let id = transversal.len() as u32;
                transversal.push(x as u32);
                for (k, &h) in emb.image().iter().enumerate() {
                    let y = sup.mul(h, x);
                    right_h[y] = k as u32;
                    right_t[y] = x as u32;
                    coset[y] = id;
                }
            }
            if left_u[x] == none {
                for (k, &h) in emb.image().iter().enumerate() {
                    let y = sup.mul(x, h);
                    left_u[y] = x as u32;
                    left_h[y] = k as u32;
                }
            }
        }
        FactorTables { right_h, right_t, left_u, left_h, coset, transversal }
    }
}

/// The free product with amalgamation `L *_H G` of two finite groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmalgamContext {
    pub(crate) emb: [SubgroupEmbedding; 2],
    pub(crate) tables: [FactorTables; 2],
}

impl AmalgamContext {
    /// `emb_l[k]` and `emb_g[k]` are the images of the `k`-th element of `H`.
    pub fn new(
        l: FiniteGroup,
        g: FiniteGroup,
        h: FiniteGroup,
        emb_l: Vec<usize>,
        emb_g: Vec<usize>,
    ) -> Result<AmalgamContext, AmalgamError> {
        let wrap = |side: Side| {
            move |e: FinGroupError| match e {
                FinGroupError::BadEmbedding { a, b, reason } => {
                    AmalgamError::BadEmbedding { side, a, b, reason: reason.to_string() }
                }
                other => AmalgamError::Group(other),
            }
        };
        let el = SubgroupEmbedding::new(h.clone(), l, emb_l).map_err(wrap(Side::L))?;
        let eg = SubgroupEmbedding::new(h, g, emb_g).map_err(wrap(Side::G))?;
        Self::from_embeddings(el, eg)
    }

    /// Both embeddings must have the same subgroup `H`, whose identity is
    /// element 0.
    pub fn from_embeddings(emb_l: SubgroupEmbedding, emb_g: SubgroupEmbedding) -> Result<AmalgamContext, AmalgamError> {
        if emb_l.sub().rows() != emb_g.sub().rows() {
            return Err(AmalgamError::BadEmbedding {
                side: Side::G,
                a: emb_l.sub().order(),
                b: emb_g.sub().order(),
                reason: "the two embeddings have different subgroups".into(),
            });
        }
        if emb_l.sub().identity() != 0 {
            return Err(AmalgamError::BadEmbedding {
                side: Side::L,
                a: emb_l.sub().identity(),
                b: 0,
                reason: "the identity of H must be element 0".into(),
            });
        }
        let tables = [FactorTables::build(&emb_l), FactorTables::build(&emb_g)];
        Ok(AmalgamContext { emb: [emb_l, emb_g], tables })
    }

    pub fn factor(&self, side: Side) -> &FiniteGroup {
        self.emb[side.index()].sup()
    }

    pub fn l(&self) -> &FiniteGroup {
        self.factor(Side::L)
    }

    pub fn g(&self) -> &FiniteGroup {
        self.factor(Side::G)
    }

    pub fn h_group(&self) -> &FiniteGroup {
        self.emb[0].sub()
    }

    pub fn h_order(&self) -> usize {
        self.h_group().order()
    }

    pub fn embedding(&self, side: Side) -> &SubgroupEmbedding {
        &self.emb[side.index()]
    }

    /// Image of the `H` element `k` in a factor.
    #[inline]
    pub fn h_image(&self, side: Side, k: usize) -> usize {
        self.emb[side.index()].map(k)
    }

    /// `H` index of a factor element, if it lies in `H`.
    #[inline]
    pub fn h_index(&self, side: Side, x: usize) -> Option<usize> {
        self.emb[side.index()].preimage(x)
    }

    #[inline]
    pub fn in_h(&self, side: Side, x: usize) -> bool {
        self.emb[side.index()].contains(x)
    }

    /// Minimal-index representatives of the right cosets `Hx`, ascending;
    /// the first one is the identity.
    pub fn transversal(&self, side: Side) -> Vec<usize> {
        self.tables[side.index()].transversal.iter().map(|&t| t as usize).collect()
    }

    pub fn coset_count(&self, side: Side) -> usize {
        self.tables[side.index()].transversal.len()
    }

    /// Right coset id of `x`; 0 is the coset `H`.
    pub fn coset_id(&self, side: Side, x: usize) -> usize {
        self.tables[side.index()].coset[x] as usize
    }

    /// `x = h·t` with `h ∈ H` (as an `H` index) and `t` the representative
    /// of `Hx`.
    #[inline]
    pub fn decompose(&self, side: Side, x: usize) -> (usize, usize) {
        let t = &self.tables[side.index()];
        (t.right_h[x] as usize, t.right_t[x] as usize)
    }

    /// `x = u·h` with `u` the minimal element of `xH`.
    #[inline]
    pub fn decompose_left(&self, side: Side, x: usize) -> (usize, usize) {
        let t = &self.tables[side.index()];
        (t.left_u[x] as usize, t.left_h[x] as usize)
    }

    /// Elements of a factor outside `H`, ascending.
    pub fn outside_h(&self, side: Side) -> Vec<usize> {
        self.factor(side).elements().filter(|&x| !self.in_h(side, x)).collect()
    }

    /// Checks that a word is a normal form over this context.
    pub fn check_word(&self, w: &AmalgamWord) -> Result<(), AmalgamError> {
        let bad = |msg: String| Err(AmalgamError::ContextMismatch(msg));
        if w.h() >= self.h_order() {
            return bad(format!("H index {} out of range for order {}", w.h(), self.h_order()));
        }
        for (i, l) in w.letters().iter().enumerate() {
            let side = l.side();
            if l.elem() >= self.factor(side).order() {
                return bad(format!("letter {i} ({l}) out of range"));
            }
            if i > 0 && w.letters()[i - 1].side() == side {
                return bad(format!("letters {} and {i} lie in the same factor", i - 1));
            }
            let (_, t) = self.decompose(side, l.elem());
            if t != l.elem() || self.in_h(side, t) {
                return bad(format!("letter {i} ({l}) is not a coset representative outside H"));
            }
        }
        Ok(())
    }
}
