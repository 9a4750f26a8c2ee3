#pragma once

#include <cqc/model.hpp>

#include <functional>

namespace cqc {

// pins[v] is the prescribed image of query vertex v, or -1.
using PinSet = std::vector<int>;

using AnswerCounter = std::function<BigInt(const Query&, const Structure&)>;

BigInt count_extensions(const Query& q, const Structure& t, const PinSet& pins);

// Honours the query's inequalities and negated atoms.
BigInt count_answers(const Query& q, const Structure& t);
BigInt count_cp_answers(const Query& q, const Structure& t, const Coloring& c);
BigInt count_cf_answers(const Query& q, const Structure& t, const Coloring& c);
BigInt count_surjective_answers(const Query& q, const Structure& t, const std::vector<int>& z);
BigInt count_partial_automorphisms(const Query& q);

// Calls f on each answer (indexed like q.free); f returns false to stop.
void for_each_answer(const Query& q, const Structure& t, const std::function<bool(const Assignment&)>& f);

bool has_homomorphism(const Structure& from, const Structure& to);

// Some map X1 -> X2 onto X2 extends to a homomorphism H1 -> H2.
bool has_surjective_extension(const Query& q1, const Query& q2);

Query augmented_core(const Query& q);
bool are_equivalent(const Query& q1, const Query& q2);
bool is_minimal(const Query& q);
bool endomorphism_bijective_on_X_is_automorphism_check(const Query& q);

}  // namespace cqc
