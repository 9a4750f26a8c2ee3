#pragma once

#include <cqc/hom.hpp>
#include <cqc/model.hpp>

#include <functional>
#include <string>
#include <vector>

namespace cqc {

// complement: every term is evaluated on the full (reflexive) complement of the target.
enum class Transform { identity, complement };

struct QuantumTerm {
    Rational coeff;
    Query query;

    bool operator==(const QuantumTerm&) const = default;
};

struct QuantumQuery {
    std::vector<QuantumTerm> terms;
    Transform transform = Transform::identity;

    bool operator==(const QuantumQuery&) const = default;
};

// Augmented cores, equivalent terms merged, zero terms dropped, canonical order.
QuantumQuery normalize(const QuantumQuery& qq);

const Structure& evaluation_target(const QuantumQuery& qq, const Structure& t, Structure& storage);
Rational evaluate(const QuantumQuery& qq, const Structure& t, const AnswerCounter& counter = count_answers);

// Positions of the support in an order where no query admits a surjective
// extendable map onto a later one.
std::vector<int> linear_order(const std::vector<Query>& support);

// L[i][j] = number of surjective maps X_i -> X_j extending to H_i -> H_j.
std::vector<std::vector<BigInt>> surjection_matrix(const std::vector<Query>& support);

// A[i][f] = count_answers(support[i], family[f]).
std::vector<std::vector<BigInt>> evaluation_matrix(const std::vector<Query>& support, const std::vector<Structure>& family);

// Free-vertex clones of each support structure over {1..|X|+1}^X, pruned
// greedily to as many structures as the support has queries.
// Throws ModelError when the support is not linearly independent.
std::vector<Structure> build_test_family(const std::vector<Query>& support);

int matrix_rank(std::vector<std::vector<Rational>> m);

using QuantumOracle = std::function<Rational(const Structure&)>;

struct Extraction {
    std::vector<BigInt> counts;  // one per term of the normalized input
    int oracle_calls = 0;
    int max_oracle_size = 0;
};

// Recovers count_answers(term_i, evaluation target of t) from
// oracle(s) = evaluate(qq, s).
Extraction extract_constituent_counts(const QuantumQuery& qq, const Structure& t, const QuantumOracle& oracle);

QuantumQuery parse_quantum(const std::string& text);
std::string serialize_quantum(const QuantumQuery& qq);

}  // namespace cqc
