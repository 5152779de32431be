#pragma once

#include <string>

#include "dbar/field.hpp"
#include "dbar/geometry.hpp"
#include "dbar/quadrature.hpp"
#include "json.hpp"

namespace dbar {

using json = nlohmann::ordered_json;

/// "disk:r", "disk:cx,r", "disk:cx,cy,r", "ellipse:a,b", "perturbed_disk:delta,mode[,radius]".
PlanarDomain parse_domain(const std::string& text);
/// {"kind": "disk", "center": [x, y], "radius": r}, {"kind": "ellipse", "semi_a": a, "semi_b": b},
/// {"kind": "perturbed_disk", "delta": d, "mode": m, "radius": r}; a plain string is parsed as above.
PlanarDomain domain_from_json(const json& j);

/// "f_nu:nu", "u_nu:nu", "du_nu:nu", "constant:re[,im]", "abs_power:alpha",
/// "polynomial:p,q=re[,im];p,q=re[,im]...".
ScalarField parse_field(const std::string& text);
/// {"kind": "f_nu", "nu": 2}, {"kind": "constant", "re": 1, "im": 0},
/// {"kind": "polynomial", "terms": [{"p": 1, "q": 0, "re": 1, "im": 0}]}; strings accepted.
ScalarField field_from_json(const json& j);

/// Applies "key=value,..." overrides; pv_epsilons takes ';'-separated values.
QuadratureSpec parse_quad(const std::string& text, QuadratureSpec base = {});
QuadratureSpec quad_from_json(const json& j, QuadratureSpec base = {});
json quad_to_json(const QuadratureSpec& spec);

/// "re", "re,im" or "re+imi"-free plain pair forms.
cplx parse_point(const std::string& text);

/// Shortest round-trip decimal (17 significant digits).
std::string format_double(double x);

}  // namespace dbar
