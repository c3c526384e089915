use crate::config::MenuItem;

/// Minimum accumulated movement, in input counts, before a menu item highlights.
pub const MENU_DEADZONE: f64 = 8.0;

/// A radial menu fanned out around the cursor. Item 0 sits at North and the
/// rest follow clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialMenu {
    pub items: Vec<MenuItem>,
    /// Accumulated movement since opening, in counts (+y is screen-down).
    pub accumulated: (f64, f64),
    pub open: bool,
    pub highlighted: Option<usize>,
    /// Node the menu was opened on; `None` for the void menu.
    pub target: Option<String>,
}

impl RadialMenu {
    pub fn open(items: Vec<MenuItem>, target: Option<String>) -> Self {
        Self { items, accumulated: (0.0, 0.0), open: true, highlighted: None, target }
    }

    pub fn closed() -> Self {
        Self { items: Vec::new(), accumulated: (0.0, 0.0), open: false, highlighted: None, target: None }
    }
}

/// Accumulates a delta and returns the highlighted index.
pub fn menu_navigate(menu: &mut RadialMenu, dx: f64, dy: f64) -> Option<usize> {
    menu.accumulated.0 += dx;
    menu.accumulated.1 += dy;
    let (ax, ay) = menu.accumulated;
    let n = menu.items.len();
    if n > 0 && ax.hypot(ay) >= MENU_DEADZONE {
        let sector = 360.0 / n as f64;
        let bearing = ax.atan2(-ay).to_degrees();
        menu.highlighted = Some(((bearing / sector).round() as i64).rem_euclid(n as i64) as usize);
    }
    menu.highlighted
}

/// Closes the menu, returning the highlighted action if any.
pub fn menu_confirm(menu: &mut RadialMenu) -> Option<String> {
    let action = menu.highlighted.and_then(|i| menu.items.get(i)).map(|item| item.action.clone());
    *menu = RadialMenu::closed();
    action
}
