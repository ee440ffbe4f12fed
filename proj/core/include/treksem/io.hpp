#pragma once

#include <string>
#include <string_view>

#include "treksem/graph.hpp"
#include "treksem/moments.hpp"
#include "treksem/nontree.hpp"

namespace treksem {

// Text formats, all 1-based.  Parsers throw Error(ParseError) with the field
// at fault; graph construction errors (InvalidGraph) pass through unchanged.

/// {"n": 3, "edges": [[1, 2], [2, 3]]}
std::string graph_to_json(const DirectedGraph& g);
DirectedGraph parse_graph(std::string_view text);

/// {"n": 2, "S": [[1, 1, "1"], ...], "T": [[1, 1, 1, "2/3"], ...]}.  Exact
/// values are written as strings, floats as numbers.  Omitted entries are 0;
/// indices may come in any order.  A second entry for the same coordinate
/// with a different value throws AsymmetricInput.  The exact parser accepts
/// integers and "p/q" strings only; the float parser also takes numbers.
template <class Scalar>
std::string moments_to_json(const MomentData<Scalar>& m);
template <class Scalar>
MomentData<Scalar> parse_moments(std::string_view text);

/// {"lambda": [[tail, head, value], ...], "omega2": [...], "omega3": [...]}
/// with lambda listed in the graph's edge order.  The parser accepts any
/// edge order and throws ShapeMismatch when an edge is missing or unknown.
template <class Scalar>
std::string params_to_json(const DirectedGraph& g, const ModelParameters<Scalar>& p);
template <class Scalar>
ModelParameters<Scalar> parse_params(const DirectedGraph& g, std::string_view text);

/// {"rows": ["empty", 1, 2], "cols": [[1, 3], [2, 2], [2, 3]]}.  Labels are
/// only range-checked by validate_spec.
std::string spec_to_json(const MatrixSpec& spec);
MatrixSpec parse_spec(std::string_view text);

}  // namespace treksem
