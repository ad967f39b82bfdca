use super::{AmalgamContext, AmalgamError, AmalgamWord, Letter, Side, Syllable};

/// Accumulates a normal form from the right: the state `h·rev[last]⋯rev[0]`
/// is always in normal form.
pub(crate) struct Builder<'a> {
    ctx: &'a AmalgamContext,
    h: usize,
    rev: Vec<Letter>,
}

impl<'a> Builder<'a> {
    pub(crate) fn new(ctx: &'a AmalgamContext) -> Self {
        Builder { ctx, h: 0, rev: Vec::new() }
    }

    pub(crate) fn from_word(ctx: &'a AmalgamContext, w: &AmalgamWord, extra: usize) -> Self {
        let mut rev = Vec::with_capacity(w.letters.len() + extra);
        rev.extend(w.letters.iter().rev().copied());
        Builder { ctx, h: w.h(), rev }
    }

    /// Left-multiplies by a factor element.
    pub(crate) fn prepend(&mut self, side: Side, x: usize) {
        let f = self.ctx.factor(side);
        let mut y = f.mul(x, self.ctx.h_image(side, self.h));
        if let Some(top) = self.rev.last() {
            if top.side() == side {
                y = f.mul(y, top.elem());
                self.rev.pop();
            }
        }
        let (k, t) = self.ctx.decompose(side, y);
        if !self.ctx.in_h(side, t) {
            self.rev.push(Letter::new(side, t));
        }
        self.h = k;
    }

    /// Left-multiplies by an element of `H`.
    pub(crate) fn prepend_h(&mut self, k: usize) {
        self.h = self.ctx.h_group().mul(k, self.h);
    }

    pub(crate) fn finish(mut self) -> AmalgamWord {
        self.rev.reverse();
        AmalgamWord { h: self.h as u32, letters: self.rev }
    }
}

impl AmalgamContext {
    fn check_syllable(&self, s: Syllable) -> Result<(), AmalgamError> {
        let (group, x) = match s {
            Syllable::L(x) => (self.l(), x),
            Syllable::G(x) => (self.g(), x),
            Syllable::H(x) => (self.h_group(), x),
        };
        group.check_element(x)?;
        Ok(())
    }

    /// Normal form of an arbitrary product of factor and `H` elements.
    pub fn normalize(&self, raw: &[Syllable]) -> Result<AmalgamWord, AmalgamError> {
        for &s in raw {
            self.check_syllable(s)?;
        }
        let mut b = Builder::new(self);
        for &s in raw.iter().rev() {
            match s {
                Syllable::L(x) => b.prepend(Side::L, x),
                Syllable::G(x) => b.prepend(Side::G, x),
                Syllable::H(k) => b.prepend_h(k),
            }
        }
        Ok(b.finish())
    }

    /// Parses a raw literal such as `"L:1 G:3"` and normalizes it.
    pub fn parse_word(&self, text: &str) -> Result<AmalgamWord, AmalgamError> {
        self.normalize(&super::parse_raw(text)?)
    }

    /// The element `x` of one factor as a word.
    pub fn letter_word(&self, side: Side, x: usize) -> AmalgamWord {
        let mut b = Builder::new(self);
        b.prepend(side, x);
        b.finish()
    }

    /// The element `k` of `H` as a word.
    pub fn h_word(&self, k: usize) -> AmalgamWord {
        AmalgamWord { h: k as u32, letters: Vec::new() }
    }

    pub fn mul(&self, a: &AmalgamWord, b: &AmalgamWord) -> AmalgamWord {
        let mut out = Builder::from_word(self, b, a.letters.len());
        for l in a.letters.iter().rev() {
            out.prepend(l.side(), l.elem());
        }
        out.prepend_h(a.h());
        out.finish()
    }

    /// Product of several words, left to right.
    pub fn product<'w, I>(&self, words: I) -> AmalgamWord
    where
        I: IntoIterator<Item = &'w AmalgamWord>,
        I::IntoIter: DoubleEndedIterator,
    {
        let mut out = Builder::new(self);
        for w in words.into_iter().rev() {
            for l in w.letters.iter().rev() {
                out.prepend(l.side(), l.elem());
            }
            out.prepend_h(w.h());
        }
        out.finish()
    }

    /// [`mul`](Self::mul) after checking both operands.
    pub fn checked_mul(&self, a: &AmalgamWord, b: &AmalgamWord) -> Result<AmalgamWord, AmalgamError> {
        self.check_word(a)?;
        self.check_word(b)?;
        Ok(self.mul(a, b))
    }

    pub fn invert(&self, w: &AmalgamWord) -> AmalgamWord {
        let hg = self.h_group();
        let mut out = Builder::new(self);
        out.prepend_h(hg.inv(w.h()));
        for l in &w.letters {
            let f = self.factor(l.side());
            out.prepend(l.side(), f.inv(l.elem()));
        }
        out.finish()
    }

    /// `c·w·c⁻¹`.
    pub fn conjugate(&self, c: &AmalgamWord, w: &AmalgamWord) -> AmalgamWord {
        self.product([c, w, &self.invert(c)])
    }

    /// `c·w·c⁻¹` for a single factor element `c`.
    pub fn conjugate_by_letter(&self, side: Side, c: usize, w: &AmalgamWord) -> AmalgamWord {
        let mut out = Builder::new(self);
        out.prepend(side, self.factor(side).inv(c));
        for l in w.letters.iter().rev() {
            out.prepend(l.side(), l.elem());
        }
        out.prepend_h(w.h());
        out.prepend(side, c);
        out.finish()
    }

    /// `h·t₁⋯t_k` as a word (`k ≤ |w|`).
    pub fn prefix(&self, w: &AmalgamWord, k: usize) -> AmalgamWord {
        AmalgamWord { h: w.h, letters: w.letters[..k].to_vec() }
    }

    /// Left normal form: `w = u₁⋯uₙ·c` with every `uᵢ` the minimal element
    /// of `uᵢH`. Two prefixes of equal length agree up to a right factor in
    /// `H` exactly when their left normal forms agree letter by letter.
    pub fn lnf(&self, w: &AmalgamWord) -> (Vec<Letter>, usize) {
        let mut out = Vec::with_capacity(w.len());
        let c = self.lnf_into(w.h(), &w.letters, &mut out);
        (out, c)
    }

    /// Appends the left normal form letters of `k·t₁⋯tₙ` to `out` and
    /// returns the final `H` carry.
    pub(crate) fn lnf_into(&self, k: usize, letters: &[Letter], out: &mut Vec<Letter>) -> usize {
        let mut c = k;
        for l in letters {
            let (u, c2) = self.lnf_step(c, *l);
            out.push(u);
            c = c2;
        }
        c
    }

    #[inline]
    pub(crate) fn lnf_step(&self, carry: usize, l: Letter) -> (Letter, usize) {
        let side = l.side();
        let y = self.factor(side).mul(self.h_image(side, carry), l.elem());
        let (u, c) = self.decompose_left(side, y);
        (Letter::new(side, u), c)
    }

    /// A canonical representation read off the normal form: `h·t₁`
    /// merged into one syllable, then `t₂, …, tₙ`.
    pub fn canonical_letters(&self, w: &AmalgamWord) -> Vec<Letter> {
        let mut out = w.letters.clone();
        if let Some(first) = out.first_mut() {
            let side = first.side();
            let x = self.factor(side).mul(self.h_image(side, w.h()), first.elem());
            *first = Letter::new(side, x);
        }
        out
    }

    /// Readable form `(h; t₁, …, tₙ)` using generator labels when the
    /// factors have them; `h` is shown through its image in `L`.
    pub fn pretty(&self, w: &AmalgamWord) -> String {
        let h = self.l().element_name(self.h_image(Side::L, w.h()));
        if w.is_empty() {
            return format!("({h})");
        }
        let body: Vec<String> = w.letters.iter().map(|l| self.factor(l.side()).element_name(l.elem())).collect();
        format!("({h}; {})", body.join(", "))
    }
}
