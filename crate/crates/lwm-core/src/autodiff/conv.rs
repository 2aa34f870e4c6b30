//! Convolution kernels: im2col-based forward plus the two adjoint maps
//! (input gradient, weight gradient). All three are linear/bilinear, so the
//! graph can express each one's derivative in terms of the other two.

use ndarray::{Array2, Array3, Array4, ArrayD, ArrayView2, ArrayView3, Axis, Ix4};

use crate::par;

/// Geometry of one conv application, fixed when the node is created.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConvGeom {
    pub batch: usize,
    pub in_ch: usize,
    pub h: usize,
    pub w: usize,
    pub out_ch: usize,
    pub kernel: usize,
    pub stride: usize,
    pub pad: usize,
    pub oh: usize,
    pub ow: usize,
}

impl ConvGeom {
    pub fn new(
        batch: usize,
        in_ch: usize,
        h: usize,
        w: usize,
        out_ch: usize,
        kernel: usize,
        stride: usize,
        pad: usize,
    ) -> Option<Self> {
        if kernel == 0 || stride == 0 || h + 2 * pad < kernel || w + 2 * pad < kernel {
            return None;
        }
        let oh = (h + 2 * pad - kernel) / stride + 1;
        let ow = (w + 2 * pad - kernel) / stride + 1;
        Some(ConvGeom { batch, in_ch, h, w, out_ch, kernel, stride, pad, oh, ow })
    }

    pub fn col_rows(&self) -> usize {
        self.in_ch * self.kernel * self.kernel
    }
}

/// Extract patches of one image into a (C*k*k, OH*OW) matrix.
fn im2col_one(x: ArrayView3<f64>, g: &ConvGeom, cols: &mut Array2<f64>) {
    let k = g.kernel;
    for c in 0..g.in_ch {
        for ky in 0..k {
            for kx in 0..k {
                let row = (c * k + ky) * k + kx;
                for oy in 0..g.oh {
                    let iy = (oy * g.stride + ky) as isize - g.pad as isize;
                    for ox in 0..g.ow {
                        let ix = (ox * g.stride + kx) as isize - g.pad as isize;
                        let v = if iy >= 0 && (iy as usize) < g.h && ix >= 0 && (ix as usize) < g.w {
                            x[[c, iy as usize, ix as usize]]
                        } else {
                            0.0
                        };
                        cols[[row, oy * g.ow + ox]] = v;
                    }
                }
            }
        }
    }
}

/// Adjoint of `im2col_one`: scatter-add patch columns back into image shape.
fn col2im_one(cols: ArrayView2<f64>, g: &ConvGeom, out: &mut Array3<f64>) {
    let k = g.kernel;
    for c in 0..g.in_ch {
        for ky in 0..k {
            for kx in 0..k {
                let row = (c * k + ky) * k + kx;
                for oy in 0..g.oh {
                    let iy = (oy * g.stride + ky) as isize - g.pad as isize;
                    if iy < 0 || iy as usize >= g.h {
                        continue;
                    }
                    for ox in 0..g.ow {
                        let ix = (ox * g.stride + kx) as isize - g.pad as isize;
                        if ix < 0 || ix as usize >= g.w {
                            continue;
                        }
                        out[[c, iy as usize, ix as usize]] += cols[[row, oy * g.ow + ox]];
                    }
                }
            }
        }
    }
}

fn weight_matrix(w: &ArrayD<f64>, g: &ConvGeom) -> Array2<f64> {
    w.view()
        .into_shape((g.out_ch, g.col_rows()))
        .expect("conv weight shape")
        .to_owned()
}

/// y[b] = W2 * im2col(x[b]), W2 = weight reshaped to (K, C*k*k).
pub fn conv2d(x: &ArrayD<f64>, w: &ArrayD<f64>, g: &ConvGeom) -> ArrayD<f64> {
    let x4 = x.view().into_dimensionality::<Ix4>().expect("conv input rank 4");
    let w2 = weight_matrix(w, g);
    let mut out = Array4::<f64>::zeros((g.batch, g.out_ch, g.oh, g.ow));
    let slots: Vec<_> = out.axis_iter_mut(Axis(0)).collect();
    par::indexed_for_each(slots, |b, mut ob| {
        let mut cols = Array2::<f64>::zeros((g.col_rows(), g.oh * g.ow));
        im2col_one(x4.index_axis(Axis(0), b), g, &mut cols);
        let y = w2.dot(&cols); // (K, OH*OW)
        let y3 = y.into_shape((g.out_ch, g.oh, g.ow)).unwrap();
        ob.assign(&y3);
    });
    out.into_dyn()
}

/// Gradient w.r.t. the conv input: gx[b] = col2im(W2^T * gy[b]).
pub fn conv_input_grad(gy: &ArrayD<f64>, w: &ArrayD<f64>, g: &ConvGeom) -> ArrayD<f64> {
    let gy4 = gy.view().into_dimensionality::<Ix4>().expect("conv grad rank 4");
    let w2 = weight_matrix(w, g);
    let wt = w2.t().to_owned(); // (C*k*k, K)
    let mut out = Array4::<f64>::zeros((g.batch, g.in_ch, g.h, g.w));
    let slots: Vec<_> = out.axis_iter_mut(Axis(0)).collect();
    par::indexed_for_each(slots, |b, mut ob| {
        let gb = gy4
            .index_axis(Axis(0), b)
            .into_shape((g.out_ch, g.oh * g.ow))
            .unwrap();
        let cols = wt.dot(&gb); // (C*k*k, OH*OW)
        let mut img = Array3::<f64>::zeros((g.in_ch, g.h, g.w));
        col2im_one(cols.view(), g, &mut img);
        ob.assign(&img);
    });
    out.into_dyn()
}

/// Gradient w.r.t. the conv weight: sum_b gy[b] * im2col(x[b])^T.
/// Per-item partials are reduced in batch order so results do not depend on
/// scheduling.
pub fn conv_weight_grad(x: &ArrayD<f64>, gy: &ArrayD<f64>, g: &ConvGeom) -> ArrayD<f64> {
    let x4 = x.view().into_dimensionality::<Ix4>().expect("conv input rank 4");
    let gy4 = gy.view().into_dimensionality::<Ix4>().expect("conv grad rank 4");
    let items: Vec<usize> = (0..g.batch).collect();
    let partials = par::indexed_map(items, |_, b| {
        let mut cols = Array2::<f64>::zeros((g.col_rows(), g.oh * g.ow));
        im2col_one(x4.index_axis(Axis(0), b), g, &mut cols);
        let gb = gy4
            .index_axis(Axis(0), b)
            .into_shape((g.out_ch, g.oh * g.ow))
            .unwrap();
        gb.dot(&cols.t()) // (K, C*k*k)
    });
    let mut acc = Array2::<f64>::zeros((g.out_ch, g.col_rows()));
    for p in partials {
        acc += &p;
    }
    acc.into_shape((g.out_ch, g.in_ch, g.kernel, g.kernel)).unwrap().into_dyn()
}

/// Max-pool geometry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PoolGeom {
    pub batch: usize,
    pub ch: usize,
    pub h: usize,
    pub w: usize,
    pub kernel: usize,
    pub stride: usize,
    pub oh: usize,
    pub ow: usize,
}

impl PoolGeom {
    pub fn new(batch: usize, ch: usize, h: usize, w: usize, kernel: usize, stride: usize) -> Option<Self> {
        if kernel == 0 || stride == 0 || h < kernel || w < kernel {
            return None;
        }
        Some(PoolGeom { batch, ch, h, w, kernel, stride, oh: (h - kernel) / stride + 1, ow: (w - kernel) / stride + 1 })
    }

    pub fn out_shape(&self) -> [usize; 4] {
        [self.batch, self.ch, self.oh, self.ow]
    }

    pub fn in_shape(&self) -> [usize; 4] {
        [self.batch, self.ch, self.h, self.w]
    }
}

/// Max pooling; ties go to the lowest flat index. Returns the pooled values
/// and the flat input index chosen for every output element.
pub fn maxpool(x: &ArrayD<f64>, g: &PoolGeom) -> (ArrayD<f64>, Vec<usize>) {
    let x4 = x.view().into_dimensionality::<Ix4>().expect("pool input rank 4");
    let xs = x4.as_standard_layout();
    let flat = xs.as_slice().unwrap();
    let mut out = Array4::<f64>::zeros((g.batch, g.ch, g.oh, g.ow));
    let mut idx = vec![0usize; g.batch * g.ch * g.oh * g.ow];
    let mut j = 0;
    for b in 0..g.batch {
        for c in 0..g.ch {
            let base = (b * g.ch + c) * g.h * g.w;
            for oy in 0..g.oh {
                for ox in 0..g.ow {
                    let mut best = f64::NEG_INFINITY;
                    let mut best_i = 0usize;
                    for ky in 0..g.kernel {
                        for kx in 0..g.kernel {
                            let i = base + (oy * g.stride + ky) * g.w + (ox * g.stride + kx);
                            if flat[i] > best {
                                best = flat[i];
                                best_i = i;
                            }
                        }
                    }
                    out[[b, c, oy, ox]] = best;
                    idx[j] = best_i;
                    j += 1;
                }
            }
        }
    }
    (out.into_dyn(), idx)
}

/// Gather input values at previously recorded pool indices.
pub fn pool_select(x: &ArrayD<f64>, idx: &[usize], g: &PoolGeom) -> ArrayD<f64> {
    let xs = x.as_standard_layout();
    let flat = xs.as_slice().unwrap();
    let vals: Vec<f64> = idx.iter().map(|&i| flat[i]).collect();
    ArrayD::from_shape_vec(g.out_shape().to_vec(), vals).unwrap()
}

/// Adjoint of `pool_select`: scatter-add pooled gradients back to the input.
pub fn pool_scatter(gy: &ArrayD<f64>, idx: &[usize], g: &PoolGeom) -> ArrayD<f64> {
    let gs = gy.as_standard_layout();
    let flat = gs.as_slice().unwrap();
    let mut out = vec![0.0f64; g.batch * g.ch * g.h * g.w];
    for (j, &i) in idx.iter().enumerate() {
        out[i] += flat[j];
    }
    ArrayD::from_shape_vec(g.in_shape().to_vec(), out).unwrap()
}
