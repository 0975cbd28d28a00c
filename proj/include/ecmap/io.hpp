#ifndef ECMAP_IO_HPP
#define ECMAP_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "ecmap/bounds.hpp"
#include "ecmap/classmap.hpp"
#include "ecmap/sieve.hpp"

namespace ecmap::io {

using json = nlohmann::ordered_json;

/// Integers that fit in int64 are JSON numbers, larger ones decimal strings.
json to_json(Int const & n);
/// Accepts a JSON integer or a decimal string.
Int int_from_json(json const & j);

/// {"lo": "...", "hi": "..."} with outward-rounded decimal strings.
json to_json(Interval const & x);
Interval interval_from_json(json const & j);

json to_json(QuadForm const & f); // [a, b, c]
QuadForm form_from_json(json const & j);
json to_json(RationalPoint const & P); // "x,y" or "inf"
json to_json(Curve const & E);         // [a4, a6]
Curve curve_from_json(json const & j);
char const * tri_name(Tri t);

json to_json(BoundReport const & r);
json to_json(PhiResult const & r);
json to_json(PsiRecord const & r);
json to_json(Census const & c);
json to_json(FamilyCmin const & f);

/// Witness with the curve and (u, v) it was built for, so a later pass can
/// re-derive every identity from the serialized data alone.
json witness_to_json(CubeWitness const & w, Curve const & E, Int const & u, Int const & v);
struct WitnessInput
{
    CubeWitness witness;
    Curve curve{Int(0), Int(1)};
    Int u, v;
};
WitnessInput witness_from_json(json const & j);

/// Point lists: a JSON array of "x,y" strings or [x, y] pairs, an object with
/// a "points" array, or plain text with one "x,y" per line.
std::vector<RationalPoint> points_from_text(std::string const & text);

/// SearchConfig from JSON:
/// {"curve": [a4, a6], "points": [...], "G_order": g, "n": n, "Y": y,
///  "epsilon": e, "alpha": a, "M": m, "a0": r, "b0": s, "conductor": N,
///  "sign_epsilon": +-1, "parity_filter": bool, "require_bound": bool,
///  "require_twist": bool, "require_embedding": bool, "h_limit": n}.  Missing "n" selects the least
/// admissible congruence shift for (a0, b0) when M is a power of two.
SearchConfig search_config_from_json(json const & j);

std::string read_file(std::string const & path);

} // namespace ecmap::io

#endif
