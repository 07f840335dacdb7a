//! Desk-scale architecture family: a small ConvNet (repeated
//! conv → instance-norm → smooth activation → 2× average pool blocks with a
//! linear head) and an MLP used for cross-architecture evaluation.
//!
//! Everything learnable lives in conv/linear weights and biases; the
//! normalization has no affine parameters, so the flat parameter view and
//! the pruning semantics stay unambiguous.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::distributions::{Distribution, Uniform};

use crate::engine::net;
use crate::error::{Error, Result};
use crate::params::{ParamLayout, ParamVector};
use crate::rng;
use crate::scalar::Scalar;
use crate::tensor::Tensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArchKind {
    Convnet,
    Mlp,
}

/// Shape of one example as the network sees it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputShape {
    Image { channels: usize, height: usize, width: usize },
    Vector { dim: usize },
}

impl InputShape {
    pub fn len(&self) -> usize {
        match *self {
            InputShape::Image { channels, height, width } => channels * height * width,
            InputShape::Vector { dim } => dim,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Shape of one example as tensor dims (without the batch axis).
    pub fn dims(&self) -> Vec<usize> {
        match *self {
            InputShape::Image { channels, height, width } => vec![channels, height, width],
            InputShape::Vector { dim } => vec![dim],
        }
    }

    pub fn from_dims(dims: &[usize]) -> Result<Self> {
        match dims {
            [dim] => Ok(InputShape::Vector { dim: *dim }),
            [c, h, w] => Ok(InputShape::Image { channels: *c, height: *h, width: *w }),
            other => Err(Error::structural(format!(
                "expected 1-d or 3-d example shape, got {other:?}"
            ))),
        }
    }
}

/// Full architecture description; parameter count is computable from this
/// alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArchSpec {
    pub kind: ArchKind,
    pub depth: usize,
    pub width: usize,
    pub input: InputShape,
    pub classes: usize,
}

impl ArchSpec {
    pub fn convnet(depth: usize, width: usize, input: InputShape, classes: usize) -> Result<Self> {
        let spec = ArchSpec { kind: ArchKind::Convnet, depth, width, input, classes };
        spec.validate()?;
        Ok(spec)
    }

    pub fn mlp(depth: usize, width: usize, input: InputShape, classes: usize) -> Result<Self> {
        let spec = ArchSpec { kind: ArchKind::Mlp, depth, width, input, classes };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth == 0 || self.width == 0 {
            return Err(Error::structural("depth and width must be positive".to_string()));
        }
        if self.classes < 2 {
            return Err(Error::structural("need at least two classes".to_string()));
        }
        if self.input.len() == 0 {
            return Err(Error::structural("empty input shape".to_string()));
        }
        if self.kind == ArchKind::Convnet {
            match self.input {
                InputShape::Image { height, width, .. } => {
                    let div = 1usize << self.depth;
                    if height % div != 0 || width % div != 0 {
                        return Err(Error::structural(format!(
                            "convnet depth {} needs input sides divisible by {}, got {}x{}",
                            self.depth, div, height, width
                        )));
                    }
                }
                InputShape::Vector { .. } => {
                    return Err(Error::structural(
                        "convnet requires an image-shaped input".to_string(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Short canonical string, e.g. `convnet-d3-w32-in1x16x16-c3`.
    pub fn canonical(&self) -> String {
        let kind = match self.kind {
            ArchKind::Convnet => "convnet",
            ArchKind::Mlp => "mlp",
        };
        let input = match self.input {
            InputShape::Image { channels, height, width } => {
                format!("{channels}x{height}x{width}")
            }
            InputShape::Vector { dim } => format!("{dim}"),
        };
        format!("{kind}-d{}-w{}-in{}-c{}", self.depth, self.width, input, self.classes)
    }

    /// Ordered per-layer segment table.
    pub fn layout(&self) -> Arc<ParamLayout> {
        let mut segments: Vec<(String, usize)> = Vec::new();
        match self.kind {
            ArchKind::Mlp => {
                for (l, (fan_in, fan_out)) in self.mlp_dims().into_iter().enumerate() {
                    segments.push((format!("fc{l}.w"), fan_in * fan_out));
                    segments.push((format!("fc{l}.b"), fan_out));
                }
            }
            ArchKind::Convnet => {
                let (channels, ..) = self.image_dims();
                let mut in_ch = channels;
                for l in 0..self.depth {
                    segments.push((format!("conv{l}.w"), self.width * in_ch * 9));
                    segments.push((format!("conv{l}.b"), self.width));
                    in_ch = self.width;
                }
                segments.push(("head.w".to_string(), self.classes * self.head_in()));
                segments.push(("head.b".to_string(), self.classes));
            }
        }
        Arc::new(ParamLayout::new(segments))
    }

    /// Total number of parameter slots.
    pub fn param_count(&self) -> usize {
        self.layout().total()
    }

    /// (fan_in, fan_out) per linear layer, input to logits.
    pub(crate) fn mlp_dims(&self) -> Vec<(usize, usize)> {
        let d_in = self.input.len();
        let mut dims = Vec::with_capacity(self.depth);
        let mut prev = d_in;
        for l in 0..self.depth {
            let out = if l + 1 == self.depth { self.classes } else { self.width };
            dims.push((prev, out));
            prev = out;
        }
        dims
    }

    pub(crate) fn image_dims(&self) -> (usize, usize, usize) {
        match self.input {
            InputShape::Image { channels, height, width } => (channels, height, width),
            InputShape::Vector { dim } => (1, 1, dim),
        }
    }

    /// Flattened feature count entering the convnet head.
    pub(crate) fn head_in(&self) -> usize {
        let (_, h, w) = self.image_dims();
        let div = 1usize << self.depth;
        self.width * (h / div) * (w / div)
    }
}

impl fmt::Display for ArchSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl FromStr for ArchSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let partial: PartialArch = s.parse()?;
        let input = partial
            .input
            .ok_or_else(|| Error::config(format!("arch string '{s}' is missing -in<shape>")))?;
        let classes = partial
            .classes
            .ok_or_else(|| Error::config(format!("arch string '{s}' is missing -c<classes>")))?;
        partial.resolve(input, classes)
    }
}

/// Architecture string as written in configs: the input shape and class
/// count may be omitted and filled in from the dataset, e.g. `convnet-d2`
/// or `mlp-d2-w32`.
#[derive(Debug, Clone, Copy)]
pub struct PartialArch {
    pub kind: ArchKind,
    pub depth: Option<usize>,
    pub width: Option<usize>,
    pub input: Option<InputShape>,
    pub classes: Option<usize>,
}

impl PartialArch {
    /// Fill unspecified fields with desk-scale defaults and the dataset's
    /// shape. Defaults: convnet d2 w16, mlp d2 w32.
    pub fn resolve(self, input: InputShape, classes: usize) -> Result<ArchSpec> {
        let (def_depth, def_width) = match self.kind {
            ArchKind::Convnet => (2, 16),
            ArchKind::Mlp => (2, 32),
        };
        let spec = ArchSpec {
            kind: self.kind,
            depth: self.depth.unwrap_or(def_depth),
            width: self.width.unwrap_or(def_width),
            input: self.input.unwrap_or(input),
            classes: self.classes.unwrap_or(classes),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl FromStr for PartialArch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split('-');
        let kind = match parts.next() {
            Some("convnet") => ArchKind::Convnet,
            Some("mlp") => ArchKind::Mlp,
            other => {
                return Err(Error::config(format!(
                    "unknown architecture kind {:?} in '{s}'",
                    other.unwrap_or("")
                )))
            }
        };
        let mut out = PartialArch { kind, depth: None, width: None, input: None, classes: None };
        for part in parts {
            if let Some(v) = part.strip_prefix('d') {
                out.depth = Some(parse_usize(v, s)?);
            } else if let Some(v) = part.strip_prefix('w') {
                out.width = Some(parse_usize(v, s)?);
            } else if let Some(v) = part.strip_prefix("in") {
                let dims: Vec<usize> =
                    v.split('x').map(|d| parse_usize(d, s)).collect::<Result<_>>()?;
                out.input = Some(InputShape::from_dims(&dims)?);
            } else if let Some(v) = part.strip_prefix('c') {
                out.classes = Some(parse_usize(v, s)?);
            } else {
                return Err(Error::config(format!("unknown arch component '{part}' in '{s}'")));
            }
        }
        Ok(out)
    }
}

fn parse_usize(v: &str, whole: &str) -> Result<usize> {
    v.parse()
        .map_err(|_| Error::config(format!("bad number '{v}' in arch string '{whole}'")))
}

/// Deterministic fan-in-scaled uniform initialization; biases start at
/// zero so an all-zero parameter vector and a freshly zeroed head agree.
pub fn init_params<F: Scalar>(spec: &ArchSpec, seed: u64) -> Result<ParamVector<F>> {
    spec.validate()?;
    let layout = spec.layout();
    let mut values = vec![F::zero(); layout.total()];
    let mut rng = rng::stream(seed, &format!("init.{}", spec.canonical()));
    for seg in layout.segments() {
        if seg.name.ends_with(".b") {
            continue;
        }
        let fan_in = segment_fan_in(spec, &seg.name);
        let bound = (1.0 / fan_in as f64).sqrt();
        let dist = Uniform::new_inclusive(-bound, bound);
        for slot in &mut values[seg.offset..seg.offset + seg.len] {
            *slot = F::from_f64(dist.sample(&mut rng));
        }
    }
    ParamVector::new(values, layout)
}

fn segment_fan_in(spec: &ArchSpec, name: &str) -> usize {
    match spec.kind {
        ArchKind::Mlp => {
            let l: usize = name[2..name.len() - 2].parse().expect("layer index");
            spec.mlp_dims()[l].0
        }
        ArchKind::Convnet => {
            if name == "head.w" {
                spec.head_in()
            } else {
                let l: usize = name[4..name.len() - 2].parse().expect("block index");
                let (channels, ..) = spec.image_dims();
                let in_ch = if l == 0 { channels } else { spec.width };
                in_ch * 9
            }
        }
    }
}

/// Forward pass: images to logits, batch rows independent.
pub fn forward<F: Scalar>(
    spec: &ArchSpec,
    params: &ParamVector<F>,
    images: &Tensor<F>,
) -> Result<Tensor<F>> {
    if params.len() != spec.param_count() {
        return Err(Error::structural(format!(
            "params have {} slots, {} expects {}",
            params.len(),
            spec.canonical(),
            spec.param_count()
        )));
    }
    let batch = check_batch_shape(spec, images)?;
    let (logits, _) = net::net_forward(spec, params.values(), images.data(), batch);
    let out = Tensor::new(vec![batch, spec.classes], logits)?;
    out.ensure_finite("forward logits")?;
    Ok(out)
}

/// Validate the batch axis + example shape against the spec; returns the
/// batch size.
pub fn check_batch_shape<F: Scalar>(spec: &ArchSpec, images: &Tensor<F>) -> Result<usize> {
    let shape = images.shape();
    if shape.is_empty() || shape[1..].iter().product::<usize>() != spec.input.len() {
        return Err(Error::structural(format!(
            "image shape {:?} does not match {} input {:?}",
            shape,
            spec.canonical(),
            spec.input.dims()
        )));
    }
    Ok(shape[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mlp_4_8_3() -> ArchSpec {
        ArchSpec::mlp(2, 8, InputShape::Vector { dim: 4 }, 3).unwrap()
    }

    #[test]
    fn mlp_param_count_matches_hand_arithmetic() {
        // 4*8+8 + 8*3+3 = 67
        assert_eq!(mlp_4_8_3().param_count(), 67);
    }

    #[test]
    fn convnet_param_count_matches_closed_form() {
        let spec =
            ArchSpec::convnet(2, 16, InputShape::Image { channels: 1, height: 16, width: 16 }, 3)
                .unwrap();
        // conv0: 16*1*9+16, conv1: 16*16*9+16, head: 3*(16*4*4)+3
        let expect = (16 * 9 + 16) + (16 * 16 * 9 + 16) + (3 * 256 + 3);
        assert_eq!(spec.param_count(), expect);
        assert_eq!(init_params::<f32>(&spec, 5).unwrap().len(), expect);
    }

    #[test]
    fn param_count_is_seed_invariant() {
        let spec = mlp_4_8_3();
        assert_eq!(
            init_params::<f64>(&spec, 0).unwrap().len(),
            init_params::<f64>(&spec, 12345).unwrap().len()
        );
    }

    #[test]
    fn init_is_deterministic_per_seed() {
        let spec = mlp_4_8_3();
        let a = init_params::<f32>(&spec, 9).unwrap();
        let b = init_params::<f32>(&spec, 9).unwrap();
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn different_seeds_differ_in_nearly_every_weight_slot() {
        let spec =
            ArchSpec::convnet(2, 16, InputShape::Image { channels: 1, height: 8, width: 8 }, 3)
                .unwrap();
        let a = init_params::<f64>(&spec, 1).unwrap();
        let b = init_params::<f64>(&spec, 2).unwrap();
        // Biases are zero in both; compare weight segments only.
        let mut differing = 0usize;
        let mut total = 0usize;
        for seg in spec.layout().segments() {
            if seg.name.ends_with(".b") {
                continue;
            }
            for i in seg.offset..seg.offset + seg.len {
                total += 1;
                if a.values()[i] != b.values()[i] {
                    differing += 1;
                }
            }
        }
        assert!(differing as f64 >= 0.99 * total as f64, "{differing}/{total}");
    }

    #[test]
    fn zero_width_or_depth_is_rejected() {
        assert!(ArchSpec::mlp(0, 8, InputShape::Vector { dim: 4 }, 3).is_err());
        assert!(ArchSpec::mlp(2, 0, InputShape::Vector { dim: 4 }, 3).is_err());
    }

    #[test]
    fn canonical_string_round_trips() {
        let spec =
            ArchSpec::convnet(3, 32, InputShape::Image { channels: 1, height: 16, width: 16 }, 3)
                .unwrap();
        let s = spec.canonical();
        assert_eq!(s, "convnet-d3-w32-in1x16x16-c3");
        let back: ArchSpec = s.parse().unwrap();
        assert_eq!(back, spec);

        let mlp = mlp_4_8_3();
        let back: ArchSpec = mlp.canonical().parse().unwrap();
        assert_eq!(back, mlp);
    }

    #[test]
    fn partial_arch_fills_defaults_from_dataset() {
        let p: PartialArch = "convnet-d3".parse().unwrap();
        let spec = p
            .resolve(InputShape::Image { channels: 1, height: 16, width: 16 }, 3)
            .unwrap();
        assert_eq!(spec.depth, 3);
        assert_eq!(spec.width, 16);
        assert_eq!(spec.classes, 3);

        let p: PartialArch = "mlp".parse().unwrap();
        let spec = p
            .resolve(InputShape::Image { channels: 1, height: 16, width: 16 }, 3)
            .unwrap();
        assert_eq!(spec.kind, ArchKind::Mlp);
        assert_eq!(spec.width, 32);
    }

    #[test]
    fn bad_arch_strings_are_config_errors() {
        assert!("resnet-d2".parse::<PartialArch>().is_err());
        assert!("convnet-q9".parse::<PartialArch>().is_err());
        assert!("convnet-d2-w16".parse::<ArchSpec>().is_err()); // missing in/c
    }
}
