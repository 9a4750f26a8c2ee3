#pragma once

#include <cqc/model.hpp>

#include <optional>

namespace cqc {

struct TreeDecomposition {
    enum class Kind { leaf, introduce, forget, join, plain };
    struct Node {
        Kind kind = Kind::plain;
        int vertex = -1;  // introduced or forgotten vertex
        std::vector<int> bag;  // sorted
        std::vector<int> children;
    };
    // Children always precede their parent, so index order is a post-order.
    std::vector<Node> nodes;
    int root = -1;
    int width = 0;
};

struct TreewidthResult {
    int width = 0;
    TreeDecomposition decomposition;  // nice
    bool exact = true;
};

constexpr int default_exact_limit = 20;

// Exact elimination-order DP up to `limit` vertices. Above it, throws unless
// `allow_heuristic`, in which case a min-degree upper bound is returned with
// exact = false. The empty graph has width 0.
TreewidthResult exact_treewidth(const Structure& g, int limit = default_exact_limit, bool allow_heuristic = false);

TreeDecomposition decomposition_from_order(const Structure& g, const std::vector<int>& order);
// Nice form with an empty leaf bag below every branch. Vertices in `keep`
// stay in the root bag; all others are forgotten before the root.
TreeDecomposition make_nice(const TreeDecomposition& td, const std::vector<int>& keep = {});
bool is_valid_decomposition(const Structure& s, const TreeDecomposition& td);
bool is_nice(const TreeDecomposition& td);

// All-free counter; td must be a valid decomposition of q's structure.
BigInt count_answers_dp(const Query& q, const Structure& t, const TreeDecomposition& td);

struct QuantifiedComponent {
    std::vector<int> ys;
    std::vector<int> boundary;  // free neighbours, ascending
};

// Components of H[Y], ordered by smallest vertex.
std::vector<QuantifiedComponent> quantified_components(const Query& q);

constexpr int default_dss_cap = 6;

struct DssStats {
    std::size_t candidate_checks = 0;
    std::size_t components = 0;
    int max_relation_arity = 0;
    int contract_width = 0;
};

std::set<Tuple> extendability_relation(const Query& q, const Structure& t, int component,
    DssStats* stats = nullptr, int dss_cap = default_dss_cap);

// The free-variable query over the extended signature together with the
// extended target. Free vertex free[i] becomes vertex i.
struct DerivedInstance {
    Query query;
    Structure target;
    bool zero = false;  // some component without free neighbours has no image
};

DerivedInstance derive_free_query(const Query& q, const Structure& t, DssStats* stats = nullptr,
    int dss_cap = default_dss_cap);

BigInt count_answers_dss(const Query& q, const Structure& t, DssStats* stats = nullptr, int dss_cap = default_dss_cap);

}  // namespace cqc
