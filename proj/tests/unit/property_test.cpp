// Copyright 2026 The prbac Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "fixtures.hpp"
#include "random_model.hpp"
#include "prbac/compiler.hpp"
#include "prbac/pdp.hpp"
#include "prbac/xml_io.hpp"

#include <doctest.h>

#include <algorithm>
#include <functional>
#include <iterator>
#include <map>
#include <set>

using namespace prbac;
using prbac::model::ModelDocument;
using prbac::model::OracleDecision;
using prbac::policy::Decision;
using prbac::testing::AccessCase;
using prbac::testing::PdpRoute;

namespace {

constexpr int kModels = 40;

std::mt19937_64 seeded(std::uint64_t salt) { return std::mt19937_64(0x5eed0000ULL + salt); }

std::set<std::string> permitted_cases(const ModelDocument &doc) {
    const auto store = compiler::compile_model(doc);
    PdpRoute route(store);
    std::set<std::string> out;
    prbac::testing::enumerate_cases(doc, [&](const AccessCase &c) {
        if (route.permits(c)) out.insert(prbac::testing::describe(c));
    });
    return out;
}

std::set<std::string> oracle_permits(const ModelDocument &doc) {
    std::set<std::string> out;
    prbac::testing::enumerate_cases(doc, [&](const AccessCase &c) {
        if (model::oracle_decide(doc, c.user, c.ri, c.service, c.action, c.aparams) == OracleDecision::Permit)
            out.insert(prbac::testing::describe(c));
    });
    return out;
}

bool includes(const std::set<std::string> &big, const std::set<std::string> &small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

} // namespace

TEST_CASE("random models are valid and respect the bounds") {
    auto rng = seeded(1);
    for (int i = 0; i < 200; ++i) {
        const auto doc = prbac::testing::random_model(rng);
        CHECK(model::validate_model(doc).empty());
        CHECK(doc.users.size() <= 5);
        CHECK(doc.roles.size() <= 4);
        CHECK(doc.services.size() <= 4);
        for (const auto &r : doc.roles) CHECK(r.param_names.size() <= 2);
        for (const auto &s : doc.services) CHECK(s.actions.size() <= 3);

        // Longest senior -> junior chain, counted in roles.
        std::function<int(const std::string &)> depth = [&](const std::string &name) {
            int best = 0;
            for (const auto &j : doc.find_role(name)->juniors) best = std::max(best, depth(j));
            return best + 1;
        };
        for (const auto &r : doc.roles) CHECK(depth(r.name) <= 3);
    }
}

TEST_CASE("PDP agrees with the oracle on sampled random models") {
    auto rng = seeded(2);
    for (int i = 0; i < kModels; ++i) {
        const auto doc = prbac::testing::random_model(rng);
        const auto report = prbac::testing::check_oracle_equivalence(doc);
        CAPTURE(report.first_failure);
        CHECK(report.mismatches == 0);
        CHECK(report.non_permit_non_na == 0);
    }
}

TEST_CASE("compiled stores are well formed and reference acyclic") {
    auto rng = seeded(3);
    for (int i = 0; i < kModels; ++i) {
        const auto store = compiler::compile_model(prbac::testing::random_model(rng));
        CHECK(store.check().empty());
        std::map<std::string, int> state; // 1 on path, 2 done
        bool cyclic = false;
        std::function<void(const std::string &)> visit = [&](const std::string &id) {
            if (state[id] == 1) cyclic = true;
            if (state[id] != 0) return;
            state[id] = 1;
            for (const auto &child : store.find(id)->children)
                if (const auto *ref = std::get_if<policy::PolicySetRef>(&child)) visit(ref->id);
            state[id] = 2;
        };
        for (const auto &ps : store.top_level()) visit(ps->id);
        CHECK_FALSE(cyclic);
    }
}

TEST_CASE("decide is deterministic and does not mutate the store") {
    auto rng = seeded(4);
    for (int i = 0; i < 10; ++i) {
        const auto doc = prbac::testing::random_model(rng);
        const auto store = compiler::compile_model(doc);
        std::vector<std::string> before;
        for (const auto &ps : store.top_level()) before.push_back(xml::serialize_policy_set(*ps));
        prbac::testing::enumerate_cases(doc, [&](const AccessCase &c) {
            const auto req = compiler::access_request(c.ri, c.service, c.action, c.aparams);
            CHECK(pdp::decide(store, req) == pdp::decide(store, req));
        });
        std::vector<std::string> after;
        for (const auto &ps : store.top_level()) after.push_back(xml::serialize_policy_set(*ps));
        CHECK(before == after);
    }
}

TEST_CASE("adding roots never removes a Permit") {
    auto rng = seeded(5);
    for (int i = 0; i < kModels; ++i) {
        const auto doc = prbac::testing::random_model(rng);
        const auto full = compiler::compile_model(doc);
        std::vector<policy::PolicySet> sets;
        for (const auto &ps : full.top_level()) sets.push_back(*ps);
        std::vector<std::string> fewer;
        for (const auto &r : full.roots())
            if (std::bernoulli_distribution(0.5)(rng)) fewer.push_back(r);
        const pdp::PolicyStore partial(sets, fewer);
        prbac::testing::enumerate_cases(doc, [&](const AccessCase &c) {
            const auto req = compiler::access_request(c.ri, c.service, c.action, c.aparams);
            if (pdp::decide(partial, req).decision == Decision::Permit)
                CHECK(pdp::decide(full, req).decision == Decision::Permit);
        });
    }
}

TEST_CASE("wildcard patterns permit a superset of their literal substitutions") {
    auto rng = seeded(6);
    int exercised = 0;
    for (int i = 0; i < kModels * 2; ++i) {
        auto doc = prbac::testing::random_model(rng);
        using Field = model::ParamBindings &(*)(model::PrivAssignment &);
        const Field fields[] = {[](model::PrivAssignment &pa) -> model::ParamBindings & { return pa.role_param_pattern; },
                                [](model::PrivAssignment &pa) -> model::ParamBindings & { return pa.privilege.aparams; }};
        for (size_t k = 0; k < doc.pa.size(); ++k) {
            for (Field field : fields) {
                for (const auto &[name, value] : field(doc.pa[k])) {
                    if (value != "*") continue;
                    for (const char *literal : {"v0", "v1"}) {
                        auto narrowed = doc;
                        field(narrowed.pa[k])[name] = literal;
                        CHECK(includes(oracle_permits(doc), oracle_permits(narrowed)));
                        CHECK(includes(permitted_cases(doc), permitted_cases(narrowed)));
                        ++exercised;
                    }
                }
            }
        }
        if (exercised > 60) break;
    }
    CHECK(exercised > 0);
}

TEST_CASE("adding a junior edge never removes a privilege") {
    auto rng = seeded(7);
    int exercised = 0;
    for (int i = 0; i < kModels; ++i) {
        const auto doc = prbac::testing::random_model(rng);
        for (const auto &senior : doc.roles) {
            for (const auto &junior : doc.roles) {
                if (senior.name == junior.name || senior.juniors.contains(junior.name)) continue;
                auto grown = doc;
                for (auto &r : grown.roles)
                    if (r.name == senior.name) r.juniors.insert(junior.name);
                // Only edges that keep the model valid.
                if (!model::validate_model(grown).empty()) continue;
                prbac::testing::enumerate_cases(doc, [&](const AccessCase &c) {
                    if (c.user != doc.users.front().id) return;
                    const auto before = model::authorized_privileges(doc, c.ri);
                    const auto after = model::authorized_privileges(grown, c.ri);
                    CHECK(std::includes(after.begin(), after.end(), before.begin(), before.end()));
                });
                ++exercised;
            }
        }
    }
    CHECK(exercised > 0);
}

TEST_CASE("removing a UA entry removes exactly its own decisions") {
    auto rng = seeded(8);
    for (int i = 0; i < kModels; ++i) {
        const auto doc = prbac::testing::random_model(rng);
        if (doc.ua.empty()) continue;
        const auto before = permitted_cases(doc);
        const size_t k = std::uniform_int_distribution<size_t>(0, doc.ua.size() - 1)(rng);
        auto smaller = doc;
        smaller.ua.erase(smaller.ua.begin() + static_cast<std::ptrdiff_t>(k));
        const auto after = permitted_cases(smaller);

        const auto &removed = doc.ua[k];
        std::set<std::string> attributable;
        prbac::testing::enumerate_cases(doc, [&](const AccessCase &c) {
            if (c.user == removed.user && c.ri == removed.role_instance) attributable.insert(prbac::testing::describe(c));
        });
        std::set<std::string> lost;
        std::set_difference(before.begin(), before.end(), after.begin(), after.end(), std::inserter(lost, lost.end()));
        std::set<std::string> expected;
        std::set_intersection(before.begin(), before.end(), attributable.begin(), attributable.end(),
                              std::inserter(expected, expected.end()));
        CHECK(lost == expected);
        CHECK(includes(before, after));
    }
}

TEST_CASE("multi-pair form and its normalized form decide alike") {
    const auto multi = xml::parse_policy_set(prbac::testing::read_data("student_pps_multipair.xml")).policy_set;
    const auto canonical_text = xml::serialize_policy_set(multi);
    REQUIRE(canonical_text != prbac::testing::read_data("student_pps_multipair.xml"));
    const auto normalized = xml::parse_policy_set(canonical_text).policy_set;

    const pdp::PolicyStore a({multi}, {multi.id});
    const pdp::PolicyStore b({normalized}, {normalized.id});

    const std::vector<policy::Attribute> alphabet{
        policy::string_attr(policy::uri::kActionId, "register"),
        policy::string_attr(policy::uri::kActionId, "drop"),
        policy::string_attr(policy::uri::kAParams, "studentid-02123781"),
        policy::string_attr(policy::uri::kAParams, "studentid-1"),
    };
    int permits = 0;
    for (unsigned mask = 0; mask < (1u << alphabet.size()); ++mask) {
        policy::RequestCtx req;
        for (size_t i = 0; i < alphabet.size(); ++i)
            if (mask & (1u << i)) req.action.push_back(alphabet[i]);
        const auto da = pdp::decide(a, req);
        CHECK(da == pdp::decide(b, req));
        if (da.decision == Decision::Permit) ++permits;
    }
    CHECK(permits == 4);
}
