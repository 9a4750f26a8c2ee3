#pragma once

#include <cqc/hom.hpp>
#include <cqc/model.hpp>

#include <functional>
#include <string>
#include <vector>

namespace cqc {

enum class FamilyKind { psi, gamma, omega, poly, w1, subdivided, phi };

// Throws ModelError on an unknown name.
FamilyKind parse_family(const std::string& name);
std::string family_name(FamilyKind kind);

// Vertex layout:
//   psi, phi    x_i = i, y = k
//   gamma       x_i = i, y_i = k + i
//   poly        x_i = i, y_i = k + i (i < k - 1)
//   w1          y_i = i, no free vertices
//   subdivided  x_i = i, then y_ij (i < j) in lexicographic order
//   omega       x^i_{k-1-i} = i, then y^i_j (i + j <= k - 1) by (i, j)
Query family_query(FamilyKind kind, int k);
int grate_quantified(int k, int i, int j);

struct MinorOp {
    enum class Kind { delete_vertex, delete_edge, contract_edge };
    Kind kind = Kind::delete_edge;
    int u = -1;
    int v = -1;
};

struct MinorResult {
    Query query;
    std::vector<int> vertex_map;  // old vertex -> new vertex, -1 when deleted
};

// Contracting uv keeps the smaller index; larger indices shift down.
MinorResult apply_query_minor(const Query& q, const MinorOp& op);

struct GadgetOutput {
    Structure target;
    Coloring coloring;
    bool zero = false;  // the source count is 0 and no instance was built
    std::string relation;
};

// t is coloured by the minor apply_query_minor(q, op); the output is coloured
// by q and has the same number of cp answers.
GadgetOutput minor_instance_gadget(const Query& q, const MinorOp& op, const Structure& t, const Coloring& c);

// q-coloured layered copy of t with count_cp_answers(q, out) = count_answers(q, t).
GadgetOutput uncolored_to_cp_gadget(const Query& q, const Structure& t);

using CpCounter = std::function<BigInt(const Query&, const Structure&, const Coloring&)>;

struct ColorfulCount {
    BigInt cf;
    BigInt cp;
    int oracle_calls = 0;
};

// Colourful answers of a minimal q from an uncoloured answer counter, by
// interpolating the cloning polynomial. Throws ModelError when q is not minimal.
ColorfulCount cf_count_via_uncolored(const Query& q, const Structure& t, const Coloring& c, const AnswerCounter& counter = count_answers);

BigInt count_surjections(int i, int j);

// Number of k-tuples whose image dominates g, through the star query oracle.
BigInt dominating_tuples(const Structure& g, int k, const CpCounter& oracle = count_cp_answers);

// D[l] = number of dominating sets of size l, for l = 0..k.
std::vector<BigInt> domset_via_star_oracle(const Structure& g, int k, const CpCounter& oracle = count_cp_answers);

// t is coloured by gamma_k; the output is coloured by omega_k (same free layout).
GadgetOutput gamma_to_grate_gadget(int k, const Structure& t, const Coloring& c);

// t is a graph coloured by the Gaifman graph of q; the output is coloured by q.
GadgetOutput gaifman_expand_gadget(const Query& q, const Structure& t, const Coloring& c);

}  // namespace cqc
