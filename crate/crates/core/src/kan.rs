//! Homogeneous composition, coercion and heterogeneous composition.

use std::sync::Arc;

use crate::builtins::fiber_ty;
use crate::cofib::eliminate_forall;
use crate::domain::{
    do_app, do_fst, do_papp, do_snd, do_unglue, whnf, whnf_ty, Clo, Ctx, Englue, FHCom, GlueTy,
    PathTy, Thunk, TyValue, Value,
};
use crate::error::{Error, Result};
use crate::syntax::{partial_boundary, Cofib, Dim};

/// A tube `i ↦ a(i)`, defined on `i = r ∨ φ`.
pub type Tube = Clo<Dim, Value>;

/// A type line `i ↦ A(i)`.
pub type Line = Clo<Dim, TyValue>;

/// `hcom^{r→s; φ}_A (i. a)`, with cap `a(r)`.
pub fn do_hcom(ctx: &Ctx, ty: &TyValue, r: Dim, s: Dim, phi: &Cofib, tube: Tube) -> Result<Value> {
    if ctx.equal_dims(r, s) || ctx.entails(phi) {
        let v = tube.apply(ctx, s)?;
        return whnf(ctx, &v);
    }
    let phi = phi.clone();
    match whnf_ty(ctx, ty)? {
        TyValue::Pi(_, cod) => Ok(Value::Lam(Clo::new(move |ctx, x: Value| {
            let ty = cod.apply(ctx, x.clone())?;
            let tube = tube.clone();
            do_hcom(
                ctx,
                &ty,
                r,
                s,
                &phi,
                Clo::memo(move |ctx, i| do_app(ctx, &tube.apply(ctx, i)?, x.clone())),
            )
        }))),
        TyValue::Sigma(dom, cod) => {
            let fill: Clo<Dim, Value> = {
                let (phi, tube) = (phi.clone(), tube.clone());
                Clo::memo(move |ctx, k| {
                    let tube = tube.clone();
                    do_hcom(
                        ctx,
                        &dom,
                        r,
                        k,
                        &phi,
                        Clo::memo(move |ctx, i| do_fst(ctx, &tube.apply(ctx, i)?)),
                    )
                })
            };
            let first = fill.apply(ctx, s)?;
            let line = {
                let fill = fill.clone();
                Clo::memo(move |ctx, k| cod.apply(ctx, fill.apply(ctx, k)?))
            };
            let second = do_com(
                ctx,
                &line,
                r,
                s,
                &phi,
                Clo::memo(move |ctx, i| do_snd(ctx, &tube.apply(ctx, i)?)),
            )?;
            Ok(Value::Pair(Arc::new((first, second))))
        }
        TyValue::Path(p) => Ok(Value::PLam(Clo::memo(move |ctx, j| {
            let ty = p.line.apply(ctx, j)?;
            let wide = Cofib::join(phi.clone(), partial_boundary(j));
            let (phi, tube, p) = (phi.clone(), tube.clone(), p.clone());
            let tube = Clo::memo(move |ctx: &Ctx, i| {
                if ctx.equal_dims(i, r) || ctx.entails(&phi) {
                    do_papp(ctx, &tube.apply(ctx, i)?, j)
                } else if ctx.equal_dims(j, Dim::Zero) {
                    Ok(p.ep0.clone())
                } else if ctx.equal_dims(j, Dim::One) {
                    Ok(p.ep1.clone())
                } else {
                    Err(Error::SystemCoverage)
                }
            });
            do_hcom(ctx, &ty, r, s, &wide, tube)
        }))),
        TyValue::S1 => Ok(Value::FHCom(Arc::new(FHCom { r, s, phi, tube }))),
        TyValue::Glue(g) => hcom_glue(ctx, g, r, s, phi, tube),
    }
}

fn hcom_glue(ctx: &Ctx, g: Arc<GlueTy>, r: Dim, s: Dim, psi: Cofib, tube: Tube) -> Result<Value> {
    // Composite in the partial type, only meaningful under g.phi.
    let partial: Clo<Dim, Value> = {
        let (g, psi, tube) = (g.clone(), psi.clone(), tube.clone());
        Clo::memo(move |ctx, y| {
            let a = g.partial_ty.force(ctx)?;
            do_hcom(ctx, &a, r, y, &psi, tube.clone())
        })
    };
    let wide = Cofib::join(psi.clone(), g.phi.clone());
    let base_tube = {
        let (g, partial) = (g.clone(), partial.clone());
        Clo::memo(move |ctx: &Ctx, k| {
            if ctx.equal_dims(k, r) || ctx.entails(&psi) {
                do_unglue(ctx, &g, &tube.apply(ctx, k)?)
            } else {
                let f = do_fst(ctx, &g.equiv.force(ctx)?)?;
                do_app(ctx, &f, partial.apply(ctx, k)?)
            }
        })
    };
    let total = do_hcom(ctx, &g.base, r, s, &wide, base_tube)?;
    Ok(Value::Englue(Arc::new(Englue {
        phi: g.phi.clone(),
        partial: Clo::memo(move |ctx, ()| partial.apply(ctx, s)),
        total,
    })))
}

/// `com^{r→s; φ}_{i.A} (i. a)`: composition after coercing the tube to
/// `A(s)`.
pub fn do_com(ctx: &Ctx, line: &Line, r: Dim, s: Dim, phi: &Cofib, tube: Tube) -> Result<Value> {
    let ty = line.apply(ctx, s)?;
    let line = line.clone();
    do_hcom(
        ctx,
        &ty,
        r,
        s,
        phi,
        Clo::memo(move |ctx, i| do_coe(ctx, &line, i, s, tube.apply(ctx, i)?)),
    )
}

/// Unfolds a type, counting the glue layers whose cofibration held.
fn unfold(ctx: &Ctx, ty: TyValue) -> Result<(TyValue, usize)> {
    let mut ty = ty;
    let mut layers = 0;
    while let TyValue::Glue(g) = &ty {
        if !ctx.entails(&g.phi) {
            break;
        }
        ty = g.partial_ty.force(ctx)?;
        layers += 1;
    }
    Ok((ty, layers))
}

/// A line whose outer `layers` glue layers are unfolded at every point.
/// The count is taken at a generic point, so the unfolding is valid at
/// every instance.
#[derive(Clone)]
struct Unfolded {
    line: Line,
    layers: usize,
}

impl Unfolded {
    fn at(&self, ctx: &Ctx, x: Dim) -> Result<TyValue> {
        let mut ty = self.line.apply(ctx, x)?;
        for _ in 0..self.layers {
            ty = match ty {
                TyValue::Glue(g) => g.partial_ty.force(ctx)?,
                _ => {
                    return Err(Error::UnsupportedLine(
                        "glue layers vary along the line".into(),
                    ))
                }
            };
        }
        Ok(ty)
    }

    fn pi(&self, ctx: &Ctx, x: Dim) -> Result<(Arc<TyValue>, Clo<Value, TyValue>)> {
        match whnf_ty(ctx, &self.at(ctx, x)?)? {
            TyValue::Pi(a, b) => Ok((a, b)),
            _ => Err(Error::UnsupportedLine("head of a pi line varies".into())),
        }
    }

    fn sigma(&self, ctx: &Ctx, x: Dim) -> Result<(Arc<TyValue>, Clo<Value, TyValue>)> {
        match whnf_ty(ctx, &self.at(ctx, x)?)? {
            TyValue::Sigma(a, b) => Ok((a, b)),
            _ => Err(Error::UnsupportedLine("head of a sigma line varies".into())),
        }
    }

    fn path(&self, ctx: &Ctx, x: Dim) -> Result<Arc<PathTy>> {
        match whnf_ty(ctx, &self.at(ctx, x)?)? {
            TyValue::Path(p) => Ok(p),
            _ => Err(Error::UnsupportedLine("head of a path line varies".into())),
        }
    }

    fn glue(&self, ctx: &Ctx, x: Dim) -> Result<Arc<GlueTy>> {
        match self.at(ctx, x)? {
            TyValue::Glue(g) => Ok(g),
            _ => Err(Error::UnsupportedLine("head of a glue line varies".into())),
        }
    }

    fn dom_line(&self) -> Line {
        let this = self.clone();
        Clo::memo(move |ctx, x| match whnf_ty(ctx, &this.at(ctx, x)?)? {
            TyValue::Pi(a, _) | TyValue::Sigma(a, _) => Ok((*a).clone()),
            _ => Err(Error::UnsupportedLine("head of a line varies".into())),
        })
    }
}

/// `coe^{r→s}_{i.A} a`.
pub fn do_coe(ctx: &Ctx, line: &Line, r: Dim, s: Dim, a: Value) -> Result<Value> {
    if ctx.equal_dims(r, s) {
        return whnf(ctx, &a);
    }
    let (generic_ctx, x) = ctx.fresh();
    let (head, layers) = unfold(&generic_ctx, line.apply(&generic_ctx, x)?)?;
    let line = Unfolded {
        line: line.clone(),
        layers,
    };
    match head {
        TyValue::S1 => whnf(ctx, &a),
        TyValue::Pi(..) => coe_pi(line, r, s, a),
        TyValue::Sigma(..) => coe_sigma(ctx, line, r, s, a),
        TyValue::Path(_) => coe_path(line, r, s, a),
        TyValue::Glue(_) => coe_glue(ctx, line, r, s, a),
    }
}

fn coe_pi(line: Unfolded, r: Dim, s: Dim, f: Value) -> Result<Value> {
    let dom = line.dom_line();
    Ok(Value::Lam(Clo::new(move |ctx, y: Value| {
        let y_r = do_coe(ctx, &dom, s, r, y.clone())?;
        let fy = do_app(ctx, &f, y_r)?;
        let (line, dom) = (line.clone(), dom.clone());
        let cod_line = Clo::memo(move |ctx, i| {
            let (_, cod) = line.pi(ctx, i)?;
            let y_i = do_coe(ctx, &dom, s, i, y.clone())?;
            cod.apply(ctx, y_i)
        });
        do_coe(ctx, &cod_line, r, s, fy)
    })))
}

fn coe_sigma(ctx: &Ctx, line: Unfolded, r: Dim, s: Dim, p: Value) -> Result<Value> {
    let dom = line.dom_line();
    let a = do_fst(ctx, &p)?;
    let b = do_snd(ctx, &p)?;
    let fill: Clo<Dim, Value> = {
        let dom = dom.clone();
        Clo::memo(move |ctx, k| do_coe(ctx, &dom, r, k, a.clone()))
    };
    let first = fill.apply(ctx, s)?;
    let cod_line = Clo::memo(move |ctx, k| {
        let (_, cod) = line.sigma(ctx, k)?;
        cod.apply(ctx, fill.apply(ctx, k)?)
    });
    let second = do_coe(ctx, &cod_line, r, s, b)?;
    Ok(Value::Pair(Arc::new((first, second))))
}

fn coe_path(line: Unfolded, r: Dim, s: Dim, p: Value) -> Result<Value> {
    Ok(Value::PLam(Clo::memo(move |ctx, j| {
        let inner = {
            let line = line.clone();
            Clo::memo(move |ctx, i| line.path(ctx, i)?.line.apply(ctx, j))
        };
        let (line, p) = (line.clone(), p.clone());
        let tube = Clo::memo(move |ctx: &Ctx, i| {
            if ctx.equal_dims(i, r) {
                do_papp(ctx, &p, j)
            } else if ctx.equal_dims(j, Dim::Zero) {
                Ok(line.path(ctx, i)?.ep0.clone())
            } else if ctx.equal_dims(j, Dim::One) {
                Ok(line.path(ctx, i)?.ep1.clone())
            } else {
                Err(Error::SystemCoverage)
            }
        });
        do_com(ctx, &inner, r, s, &partial_boundary(j), tube)
    })))
}

/// Coercion along a line of glue types. With `δ = ∀x. φ(x)`:
///
/// * `P = com^{r→s; δ}_{x.B(x)} [x = r ↪ unglue M, δ ↪ f_x(coe^{r→x}_A M)]`
///   is the image in the base;
/// * under `φ(s)`, the fiber of `f_s` over `P` is contractible, and a
///   composition in the fiber from its center adjusts the preimage so that
///   it agrees with `coe_A M` on `δ` and with `M` on `r = s`;
/// * the base component is corrected along the path of the adjusted fiber
///   element.
fn coe_glue(ctx: &Ctx, line: Unfolded, r: Dim, s: Dim, m: Value) -> Result<Value> {
    let (generic_ctx, x) = ctx.fresh();
    let delta = eliminate_forall(x, &line.glue(&generic_ctx, x)?.phi);

    let base_line = {
        let line = line.clone();
        Clo::memo(move |ctx, x| Ok(line.glue(ctx, x)?.base.clone()))
    };
    let partial_line: Line = {
        let line = line.clone();
        Clo::memo(move |ctx, x| line.glue(ctx, x)?.partial_ty.force(ctx))
    };
    let g_r = line.glue(ctx, r)?;
    let unglue_m = do_unglue(ctx, &g_r, &m)?;

    let image = {
        let (line, partial_line, m, unglue_m) = (
            line.clone(),
            partial_line.clone(),
            m.clone(),
            unglue_m.clone(),
        );
        do_com(
            ctx,
            &base_line,
            r,
            s,
            &delta,
            Clo::memo(move |ctx: &Ctx, x| {
                if ctx.equal_dims(x, r) {
                    return Ok(unglue_m.clone());
                }
                let g = line.glue(ctx, x)?;
                let f = do_fst(ctx, &g.equiv.force(ctx)?)?;
                do_app(ctx, &f, do_coe(ctx, &partial_line, r, x, m.clone())?)
            }),
        )?
    };

    let g_s = line.glue(ctx, s)?;
    let r_eq_s = Cofib::eq(r, s);
    let chi = Cofib::join(delta.clone(), r_eq_s.clone());

    // The adjusted fiber element, only meaningful under φ(s).
    let adjusted: Thunk<Value> = {
        let (g_s, image) = (g_s.clone(), image.clone());
        Clo::memo(move |ctx: &Ctx, ()| {
            let a_s = g_s.partial_ty.force(ctx)?;
            let equiv = g_s.equiv.force(ctx)?;
            let f = do_fst(ctx, &equiv)?;
            let fib = fiber_ty(a_s, g_s.base.clone(), f, image.clone());
            let contr = do_app(ctx, &do_snd(ctx, &equiv)?, image.clone())?;
            let center = do_fst(ctx, &contr)?;
            let contraction = do_snd(ctx, &contr)?;
            let (m, unglue_m, image, partial_line) = (
                m.clone(),
                unglue_m.clone(),
                image.clone(),
                partial_line.clone(),
            );
            let boundary = move |ctx: &Ctx| -> Result<Value> {
                if ctx.equal_dims(r, s) {
                    let refl = Value::PLam(Clo::constant(unglue_m.clone()));
                    Ok(Value::Pair(Arc::new((m.clone(), refl))))
                } else {
                    let a = do_coe(ctx, &partial_line, r, s, m.clone())?;
                    let refl = Value::PLam(Clo::constant(image.clone()));
                    Ok(Value::Pair(Arc::new((a, refl))))
                }
            };
            do_hcom(
                ctx,
                &fib,
                Dim::Zero,
                Dim::One,
                &chi,
                Clo::memo(move |ctx: &Ctx, j| {
                    if ctx.equal_dims(j, Dim::Zero) {
                        return Ok(center.clone());
                    }
                    let path = do_app(ctx, &contraction, boundary(ctx)?)?;
                    do_papp(ctx, &path, j)
                }),
            )
        })
    };

    let total = {
        let (image, adjusted, phi_s) = (image.clone(), adjusted.clone(), g_s.phi.clone());
        do_hcom(
            ctx,
            &g_s.base,
            Dim::One,
            Dim::Zero,
            &Cofib::join(g_s.phi.clone(), r_eq_s),
            Clo::memo(move |ctx: &Ctx, j| {
                if ctx.equal_dims(j, Dim::One) || !ctx.entails(&phi_s) {
                    return Ok(image.clone());
                }
                let path = do_snd(ctx, &adjusted.force(ctx)?)?;
                do_papp(ctx, &path, j)
            }),
        )?
    };
    let englue = Value::Englue(Arc::new(Englue {
        phi: g_s.phi.clone(),
        partial: Clo::memo(move |ctx, ()| do_fst(ctx, &adjusted.force(ctx)?)),
        total,
    }));
    whnf(ctx, &englue)
}
