//! Extended dot-bracket text: `.` unpaired, `()[]{}<>` for up to four
//! crossing layers, `&` between the two backbones.

use crate::diagram::{arcs_cross, Arc, Diagram};
use crate::{Error, Result};

const OPEN: [char; 4] = ['(', '[', '{', '<'];
const CLOSE: [char; 4] = [')', ']', '}', '>'];

pub fn parse_structure(text: &str) -> Result<Diagram> {
    let mut stacks: [Vec<(usize, usize)>; 4] = Default::default();
    let mut arcs = Vec::new();
    let mut lengths = vec![0usize];
    let mut v = 0;
    for (pos, ch) in text.trim().chars().enumerate() {
        if ch == '&' {
            lengths.push(0);
            continue;
        }
        v += 1;
        *lengths.last_mut().unwrap() += 1;
        if let Some(layer) = OPEN.iter().position(|&c| c == ch) {
            stacks[layer].push((v, pos + 1));
        } else if let Some(layer) = CLOSE.iter().position(|&c| c == ch) {
            let (i, _) = stacks[layer].pop().ok_or(Error::UnbalancedBrackets(pos + 1))?;
            arcs.push((i, v));
        } else if ch != '.' {
            return Err(Error::InvalidCharacter { ch, pos: pos + 1 });
        }
    }
    if let Some(&(_, open)) = stacks.iter().flatten().min_by_key(|e| e.1) {
        return Err(Error::UnbalancedBrackets(open));
    }
    Diagram::from_lengths(&lengths, arcs)
}

/// Assigns each arc, in order of its left endpoint, the first layer free of
/// crossing conflicts with arcs already placed.
pub fn bracket_layers(arcs: &[Arc]) -> Result<Vec<usize>> {
    let mut layers: Vec<usize> = Vec::with_capacity(arcs.len());
    for (k, &a) in arcs.iter().enumerate() {
        let layer = (0..4)
            .find(|&l| (0..k).all(|m| layers[m] != l || !arcs_cross(arcs[m], a)))
            .ok_or(Error::LayerOverflow)?;
        layers.push(layer);
    }
    Ok(layers)
}

pub fn render_structure(d: &Diagram) -> Result<String> {
    let layers = bracket_layers(d.arcs())?;
    let mut sym = vec!['.'; d.n() + 1];
    for (&(i, j), &l) in d.arcs().iter().zip(&layers) {
        sym[i] = OPEN[l];
        sym[j] = CLOSE[l];
    }
    let mut out = String::with_capacity(d.n() + 1);
    for (k, &(lo, hi)) in d.backbones().iter().enumerate() {
        if k > 0 {
            out.push('&');
        }
        out.extend(&sym[lo..=hi]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let d = parse_structure("((..))").unwrap();
        assert_eq!(d.num_backbones(), 1);
        assert_eq!(d.arcs(), &[(1, 6), (2, 5)]);
        let d = parse_structure("([&)]").unwrap();
        assert_eq!(d.backbones(), &[(1, 2), (3, 4)]);
        assert_eq!(d.arcs(), &[(1, 3), (2, 4)]);
        assert_eq!(render_structure(&parse_structure("((&))").unwrap()).unwrap(), "((&))");
    }

    #[test]
    fn empty_strands_render() {
        let d = parse_structure("...&").unwrap();
        assert_eq!(d.backbone_lengths(), vec![3, 0]);
        assert_eq!(render_structure(&d).unwrap(), "...&");
    }

    #[test]
    fn errors() {
        assert_eq!(parse_structure("(()"), Err(Error::UnbalancedBrackets(1)));
        assert_eq!(parse_structure("())"), Err(Error::UnbalancedBrackets(3)));
        assert!(matches!(parse_structure("(x)"), Err(Error::InvalidCharacter { ch: 'x', .. })));
        assert!(matches!(parse_structure("&&"), Err(Error::TooManyBackbones(3))));
        // Five mutually crossing arcs need five layers.
        let d = Diagram::one_backbone(10, (1..=5).map(|k| (k, k + 5)).collect()).unwrap();
        assert_eq!(render_structure(&d), Err(Error::LayerOverflow));
    }
}
