#pragma once

#include <cqc/decomposition.hpp>
#include <cqc/model.hpp>

#include <string>
#include <vector>

namespace cqc {

// Graph on X: uv is an edge iff uv is a Gaifman edge of H or some quantified
// component is adjacent to both u and v. Vertex i is q.free[i].
Structure contract_graph(const Query& q);

int dominating_star_size(const Query& q);

// Every two disjoint equal-sized subsets A, B of s are joined by |A|
// vertex-disjoint paths in g.
bool is_node_well_linked(const Structure& g, const std::vector<int>& s);

// Maximum number of vertex-disjoint A-B paths (unit vertex capacities).
int vertex_disjoint_paths(const Structure& g, const std::vector<int>& a, const std::vector<int>& b);

constexpr int default_lmn_cap = 16;
int linked_matching_number(const Query& q, int y_cap = default_lmn_cap);

struct ParameterReport {
    int treewidth = 0;
    bool treewidth_exact = true;
    int contract_width = 0;
    bool contract_exact = true;
    int dss = 0;
    int lmn = 0;
    bool lmn_exact = true;
    std::vector<QuantifiedComponent> components;
    bool minimal = true;
    std::vector<std::string> notes;
};

ParameterReport parameter_report(const Query& q);

struct Classification {
    std::vector<ParameterReport> reports;
    bool treewidth_grows = false;
    bool contract_grows = false;
    bool dss_grows = false;
    bool lmn_grows = false;
    std::string regime;  // P, W[1]-eq., #W[1]-eq., #W[2]-hard or #A[2]-eq.
    std::string description;
    std::vector<std::string> notes;
};

// A parameter grows along the list when its last value exceeds its first.
Classification classify(const std::vector<Query>& family);

}  // namespace cqc
