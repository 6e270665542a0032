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

#include "prbac/xml_io.hpp"

#include <expat.h>

#include <climits>
#include <memory>
#include <optional>

namespace prbac::xml {

using namespace prbac::policy;

namespace {

constexpr char kNsSep = '\x1f';

// Minimal element tree built from expat events.
struct Node {
    std::string ns;
    std::string name;
    std::vector<std::pair<std::string, std::string>> attrs;
    std::string text;
    std::vector<Node> children;
    int line = 0;

    [[nodiscard]] const std::string *attr(std::string_view key) const {
        for (const auto &[k, v] : attrs)
            if (k == key) return &v;
        return nullptr;
    }
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::string trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return std::string(s);
}

struct TreeBuilder {
    std::vector<Node *> stack;
    std::optional<Node> root;
    XML_Parser parser = nullptr;
    bool doctype = false;

    static void split_name(const XML_Char *qname, std::string &ns, std::string &local) {
        std::string_view q(qname);
        auto pos = q.find(kNsSep);
        if (pos == std::string_view::npos) {
            ns.clear();
            local = q;
        } else {
            ns = q.substr(0, pos);
            local = q.substr(pos + 1);
        }
    }

    static void XMLCALL on_start(void *data, const XML_Char *name, const XML_Char **atts) {
        auto *self = static_cast<TreeBuilder *>(data);
        Node node;
        split_name(name, node.ns, node.name);
        node.line = static_cast<int>(XML_GetCurrentLineNumber(self->parser));
        for (int i = 0; atts[i] != nullptr; i += 2) {
            std::string ans, alocal;
            split_name(atts[i], ans, alocal);
            node.attrs.emplace_back(alocal, atts[i + 1]);
        }
        if (self->stack.empty()) {
            self->root = std::move(node);
            self->stack.push_back(&*self->root);
        } else {
            auto &children = self->stack.back()->children;
            children.push_back(std::move(node));
            self->stack.push_back(&children.back());
        }
    }

    static void XMLCALL on_end(void *data, const XML_Char *) {
        static_cast<TreeBuilder *>(data)->stack.pop_back();
    }

    static void XMLCALL on_text(void *data, const XML_Char *s, int len) {
        auto *self = static_cast<TreeBuilder *>(data);
        if (!self->stack.empty()) self->stack.back()->text.append(s, static_cast<size_t>(len));
    }

    static void XMLCALL on_doctype(void *data, const XML_Char *, const XML_Char *, const XML_Char *, int) {
        auto *self = static_cast<TreeBuilder *>(data);
        self->doctype = true;
        XML_StopParser(self->parser, XML_FALSE);
    }
};

Node parse_tree(std::string_view xml) {
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
        XML_ParserCreateNS("UTF-8", kNsSep), &XML_ParserFree);
    if (!parser) throw Error("xml-syntax", "cannot create parser");
    TreeBuilder builder;
    builder.parser = parser.get();
    XML_SetUserData(parser.get(), &builder);
    XML_SetElementHandler(parser.get(), &TreeBuilder::on_start, &TreeBuilder::on_end);
    XML_SetCharacterDataHandler(parser.get(), &TreeBuilder::on_text);
    XML_SetStartDoctypeDeclHandler(parser.get(), &TreeBuilder::on_doctype);

    if (xml.size() > static_cast<size_t>(INT_MAX)) throw ParseError("xml-syntax", 0, "document too large");
    auto status = XML_Parse(parser.get(), xml.data(), static_cast<int>(xml.size()), XML_TRUE);
    const int line = static_cast<int>(XML_GetCurrentLineNumber(parser.get()));
    if (builder.doctype) throw ParseError("xml-syntax", line, "DOCTYPE is not allowed");
    if (status != XML_STATUS_OK)
        throw ParseError("xml-syntax", line, XML_ErrorString(XML_GetErrorCode(parser.get())));
    if (!builder.root) throw ParseError("xml-syntax", line, "no root element");
    return std::move(*builder.root);
}

// Walks a parsed tree in one namespace, converting it to IR.
class Reader {
public:
    Reader(std::string_view ns, ParseDiagnostics &diag) : ns_(ns), diag_(diag) {}

    void expect(const Node &n, std::string_view name) const {
        if (n.ns != ns_)
            throw ParseError("bad-namespace", n.line,
                             "element '" + n.name + "' in namespace '" + n.ns + "', expected '" + std::string(ns_) + "'");
        if (n.name != name)
            throw ParseError("unexpected-element", n.line, "'" + n.name + "' where '" + std::string(name) + "' expected");
    }

    void check_ns(const Node &n) const {
        if (n.ns != ns_)
            throw ParseError("bad-namespace", n.line,
                             "element '" + n.name + "' in namespace '" + n.ns + "', expected '" + std::string(ns_) + "'");
    }

    [[noreturn]] static void unexpected(const Node &n, std::string_view parent) {
        throw ParseError("unexpected-element", n.line, "'" + n.name + "' is not supported inside '" + std::string(parent) + "'");
    }

    static const std::string &required(const Node &n, std::string_view key) {
        const std::string *v = n.attr(key);
        if (v == nullptr) throw ParseError("missing-attribute", n.line, "'" + n.name + "' needs " + std::string(key));
        return *v;
    }

    // URIs never contain whitespace; text extracted from wrapped listings
    // sometimes does.
    std::string uri_attr(const Node &n, std::string_view key) const {
        const std::string &raw = required(n, key);
        std::string out;
        for (char c : raw)
            if (!is_space(c)) out += c;
        if (out != raw)
            diag_.normalizations.push_back("line " + std::to_string(n.line) + ": removed whitespace from " +
                                           std::string(key) + " '" + out + "'");
        return out;
    }

    static std::string leaf_text(const Node &n) {
        if (!n.children.empty())
            throw ParseError("unexpected-element", n.children.front().line, "'" + n.name + "' must hold text only");
        return trim(n.text);
    }

    void warn(const Node &n, std::string message) const { diag_.warnings.emplace_back(n.line, std::move(message)); }

protected:
    std::string_view ns_;
    ParseDiagnostics &diag_;
};

struct SectionNames {
    std::string_view section, item, match, designator;
};

constexpr SectionNames kSubjects{"Subjects", "Subject", "SubjectMatch", "SubjectAttributeDesignator"};
constexpr SectionNames kResources{"Resources", "Resource", "ResourceMatch", "ResourceAttributeDesignator"};
constexpr SectionNames kActions{"Actions", "Action", "ActionMatch", "ActionAttributeDesignator"};

std::string_view supported_type(const Node &n, std::string_view type) {
    if (type == uri::kString) return uri::kString;
    if (type == uri::kAnyUri) return uri::kAnyUri;
    throw ParseError("unsupported-id", n.line, "DataType '" + std::string(type) + "'");
}

class PolicyReader : public Reader {
public:
    explicit PolicyReader(ParseDiagnostics &diag) : Reader(uri::kPolicyNs, diag) {}

    PolicySet policy_set(const Node &n) const {
        PolicySet ps;
        if (const auto *id = n.attr("PolicySetId")) ps.id = trim(*id);
        ps.combining = combining(n, "PolicyCombiningAlgId", CombiningScope::Policy);
        bool have_target = false;
        for (const auto &c : n.children) {
            check_ns(c);
            if (c.name == "Description") continue;
            if (c.name == "Target") {
                if (have_target) unexpected(c, n.name);
                have_target = true;
                ps.target = target(c);
            } else if (c.name == "Policy") {
                ps.children.emplace_back(policy(c));
            } else if (c.name == "PolicySet") {
                ps.children.emplace_back(NestedPolicySet{std::make_shared<const PolicySet>(policy_set(c))});
            } else if (c.name == "PolicySetIdReference") {
                ps.children.emplace_back(PolicySetRef{leaf_text(c)});
            } else {
                unexpected(c, n.name);
            }
        }
        return ps;
    }

private:
    CombiningAlg combining(const Node &n, std::string_view key, CombiningScope scope) const {
        if (n.attr(key) == nullptr) {
            diag_.normalizations.push_back("line " + std::to_string(n.line) + ": no " + std::string(key) +
                                           ", assuming permit-overrides");
            return CombiningAlg::PermitOverrides;
        }
        std::string id = uri_attr(n, key);
        try {
            return combining_from_uri(id, scope);
        } catch (const Error &) {
            throw ParseError("unsupported-id", n.line, std::string(key) + " '" + id + "'");
        }
    }

    Policy policy(const Node &n) const {
        Policy p;
        if (const auto *id = n.attr("PolicyId")) p.id = trim(*id);
        p.combining = combining(n, "RuleCombiningAlgId", CombiningScope::Rule);
        bool have_target = false;
        for (const auto &c : n.children) {
            check_ns(c);
            if (c.name == "Description") continue;
            if (c.name == "Target") {
                if (have_target) unexpected(c, n.name);
                have_target = true;
                p.target = target(c);
            } else if (c.name == "Rule") {
                p.rules.push_back(rule(c));
            } else {
                unexpected(c, n.name);
            }
        }
        return p;
    }

    Rule rule(const Node &n) const {
        Rule r;
        if (const auto *id = n.attr("RuleId")) r.id = trim(*id);
        const std::string effect = trim(required(n, "Effect"));
        if (effect == "Permit") r.effect = Effect::Permit;
        else if (effect == "Deny") r.effect = Effect::Deny;
        else throw ParseError("unsupported-id", n.line, "Effect '" + effect + "'");
        for (const auto &c : n.children) {
            check_ns(c);
            if (c.name == "Description") continue;
            if (c.name == "Target" && !r.target) r.target = target(c);
            else unexpected(c, n.name);
        }
        return r;
    }

    Target target(const Node &n) const {
        Target t;
        for (const auto &c : n.children) {
            check_ns(c);
            if (c.name == kSubjects.section) t.subjects = section(c, kSubjects);
            else if (c.name == kResources.section) t.resources = section(c, kResources);
            else if (c.name == kActions.section) t.actions = section(c, kActions);
            else unexpected(c, n.name);
        }
        return t;
    }

    MatchGroups section(const Node &n, const SectionNames &names) const {
        MatchGroups groups;
        bool any = false;
        for (const auto &c : n.children) {
            check_ns(c);
            if (c.name == "Any" + std::string(names.item)) {
                any = true;
                continue;
            }
            if (c.name != names.item) unexpected(c, n.name);
            std::vector<MatchClause> group;
            for (const auto &m : c.children) {
                check_ns(m);
                if (m.name != names.match) unexpected(m, c.name);
                match(m, names, group);
            }
            groups.push_back(std::move(group));
        }
        if (any) {
            // AnyX makes the whole section match everything.
            diag_.normalizations.push_back("line " + std::to_string(n.line) + ": Any" + std::string(names.item) +
                                           " collapses " + std::string(names.section) + " to match-all");
            groups.clear();
        }
        return groups;
    }

    void match(const Node &n, const SectionNames &names, std::vector<MatchClause> &group) const {
        const MatchFunction fn = [&] {
            std::string id = uri_attr(n, "MatchId");
            try {
                return match_function_from_uri(id);
            } catch (const Error &) {
                throw ParseError("unsupported-id", n.line, "MatchId '" + id + "'");
            }
        }();

        const Node *pending_value = nullptr;
        size_t pairs = 0;
        for (const auto &c : n.children) {
            check_ns(c);
            if (c.name == "AttributeValue") {
                if (pending_value != nullptr) throw ParseError("unexpected-element", c.line, "AttributeValue without designator");
                pending_value = &c;
            } else if (c.name == names.designator) {
                if (pending_value == nullptr) throw ParseError("unexpected-element", c.line, "designator without AttributeValue");
                MatchClause clause;
                clause.function = fn;
                clause.literal = leaf_text(*pending_value);
                clause.designator.attribute_id = trim(required(c, "AttributeId"));
                clause.designator.data_type = supported_type(c, uri_attr(c, "DataType"));
                const std::string value_type(supported_type(*pending_value, uri_attr(*pending_value, "DataType")));
                if (value_type != clause.designator.data_type)
                    throw ParseError("type-mismatch", pending_value->line,
                                     "AttributeValue " + value_type + " vs designator " + clause.designator.data_type);
                if (operand_type(fn) != clause.designator.data_type)
                    throw ParseError("type-mismatch", c.line,
                                     std::string(to_uri(fn)) + " on a " + clause.designator.data_type + " designator");
                for (const auto &[k, v] : c.attrs)
                    if (k != "AttributeId" && k != "DataType") warn(c, "ignored designator attribute " + k);
                group.push_back(std::move(clause));
                pending_value = nullptr;
                ++pairs;
            } else {
                unexpected(c, n.name);
            }
        }
        if (pending_value != nullptr) throw ParseError("unexpected-element", pending_value->line, "AttributeValue without designator");
        if (pairs == 0) throw ParseError("unexpected-element", n.line, "empty " + n.name);
        if (pairs > 1)
            diag_.normalizations.push_back("line " + std::to_string(n.line) + ": split " + n.name + " with " +
                                           std::to_string(pairs) + " value/designator pairs into " +
                                           std::to_string(pairs) + " clauses");
    }
};

// Serialization

std::string escape(std::string_view s, bool attribute) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += attribute ? "&quot;" : "\""; break;
        case '\n': out += attribute ? "&#10;" : "\n"; break;
        case '\r': out += "&#13;"; break;
        case '\t': out += attribute ? "&#9;" : "\t"; break;
        default: out += c;
        }
    }
    return out;
}

class Writer {
public:
    Writer() { out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"; }

    using Attrs = std::initializer_list<std::pair<std::string_view, std::string_view>>;

    void open(std::string_view name, Attrs attrs = {}) {
        start(name, attrs);
        out_ += ">\n";
        ++depth_;
    }

    void empty(std::string_view name, Attrs attrs = {}) {
        start(name, attrs);
        out_ += "/>\n";
    }

    void leaf(std::string_view name, std::string_view text, Attrs attrs = {}) {
        start(name, attrs);
        out_ += ">";
        out_ += escape(text, false);
        out_ += "</";
        out_ += name;
        out_ += ">\n";
    }

    void close(std::string_view name) {
        --depth_;
        indent();
        out_ += "</";
        out_ += name;
        out_ += ">\n";
    }

    std::string take() { return std::move(out_); }

private:
    void indent() { out_.append(static_cast<size_t>(depth_) * 2, ' '); }

    void start(std::string_view name, Attrs attrs) {
        indent();
        out_ += "<";
        out_ += name;
        for (const auto &[k, v] : attrs) {
            out_ += " ";
            out_ += k;
            out_ += "=\"";
            out_ += escape(v, true);
            out_ += "\"";
        }
    }

    std::string out_;
    int depth_ = 0;
};

void write_section(Writer &w, const MatchGroups &groups, const SectionNames &names) {
    if (groups.empty()) return;
    w.open(names.section);
    for (const auto &group : groups) {
        if (group.empty()) {
            w.empty(names.item);
            continue;
        }
        w.open(names.item);
        for (const auto &c : group) {
            w.open(names.match, {{"MatchId", to_uri(c.function)}});
            w.leaf("AttributeValue", c.literal, {{"DataType", c.designator.data_type}});
            w.empty(names.designator, {{"AttributeId", c.designator.attribute_id}, {"DataType", c.designator.data_type}});
            w.close(names.match);
        }
        w.close(names.item);
    }
    w.close(names.section);
}

void write_target(Writer &w, const Target &t) {
    if (t.empty()) {
        w.empty("Target");
        return;
    }
    w.open("Target");
    write_section(w, t.subjects, kSubjects);
    write_section(w, t.resources, kResources);
    write_section(w, t.actions, kActions);
    w.close("Target");
}

void write_policy(Writer &w, const Policy &p) {
    w.open("Policy", {{"PolicyId", p.id}, {"RuleCombiningAlgId", to_uri(p.combining, CombiningScope::Rule)}});
    write_target(w, p.target);
    for (const auto &r : p.rules) {
        const std::string_view effect = r.effect == Effect::Permit ? "Permit" : "Deny";
        if (!r.target) {
            w.empty("Rule", {{"RuleId", r.id}, {"Effect", effect}});
            continue;
        }
        w.open("Rule", {{"RuleId", r.id}, {"Effect", effect}});
        write_target(w, *r.target);
        w.close("Rule");
    }
    w.close("Policy");
}

void write_policy_set(Writer &w, const PolicySet &ps, bool root) {
    const auto combining = to_uri(ps.combining, CombiningScope::Policy);
    if (root)
        w.open("PolicySet", {{"xmlns", uri::kPolicyNs}, {"PolicySetId", ps.id}, {"PolicyCombiningAlgId", combining}});
    else
        w.open("PolicySet", {{"PolicySetId", ps.id}, {"PolicyCombiningAlgId", combining}});
    write_target(w, ps.target);
    for (const auto &child : ps.children) {
        if (const auto *p = std::get_if<Policy>(&child)) write_policy(w, *p);
        else if (const auto *n = std::get_if<NestedPolicySet>(&child)) write_policy_set(w, *n->set, false);
        else w.leaf("PolicySetIdReference", std::get<PolicySetRef>(child).id);
    }
    w.close("PolicySet");
}

void read_attributes(const Reader &r, const Node &section, AttributeBag &bag) {
    for (const auto &a : section.children) {
        r.check_ns(a);
        if (a.name != "Attribute") Reader::unexpected(a, section.name);
        AttributeRef ref{trim(Reader::required(a, "AttributeId")), r.uri_attr(a, "DataType")};
        for (const auto &v : a.children) {
            r.check_ns(v);
            if (v.name != "AttributeValue") Reader::unexpected(v, a.name);
            bag.push_back({ref, Reader::leaf_text(v)});
        }
    }
}

void write_attributes(Writer &w, std::string_view section, const AttributeBag &bag) {
    if (bag.empty()) {
        w.empty(section);
        return;
    }
    w.open(section);
    for (const auto &a : bag) {
        w.open("Attribute", {{"AttributeId", a.ref.attribute_id}, {"DataType", a.ref.data_type}});
        w.leaf("AttributeValue", a.value);
        w.close("Attribute");
    }
    w.close(section);
}

} // namespace

ParsedPolicySet parse_policy_set(std::string_view xml) {
    const Node root = parse_tree(xml);
    ParsedPolicySet out;
    PolicyReader reader(out.diagnostics);
    reader.expect(root, "PolicySet");
    out.policy_set = reader.policy_set(root);
    return out;
}

std::string serialize_policy_set(const PolicySet &ps) {
    Writer w;
    write_policy_set(w, ps, true);
    return w.take();
}

RequestCtx parse_request(std::string_view xml) {
    const Node root = parse_tree(xml);
    ParseDiagnostics diag;
    Reader reader(uri::kContextNs, diag);
    reader.expect(root, "Request");
    RequestCtx req;
    for (const auto &c : root.children) {
        reader.check_ns(c);
        if (c.name == "Subject") read_attributes(reader, c, req.subject);
        else if (c.name == "Resource") read_attributes(reader, c, req.resource);
        else if (c.name == "Action") read_attributes(reader, c, req.action);
        else Reader::unexpected(c, root.name);
    }
    return req;
}

std::string serialize_request(const RequestCtx &req) {
    Writer w;
    w.open("Request", {{"xmlns", uri::kContextNs}});
    write_attributes(w, "Subject", req.subject);
    write_attributes(w, "Resource", req.resource);
    write_attributes(w, "Action", req.action);
    w.close("Request");
    return w.take();
}

ResponseCtx parse_response(std::string_view xml) {
    const Node root = parse_tree(xml);
    ParseDiagnostics diag;
    Reader reader(uri::kContextNs, diag);
    reader.expect(root, "Response");
    if (root.children.size() != 1) throw ParseError("unexpected-element", root.line, "Response needs exactly one Result");
    const Node &result = root.children.front();
    reader.expect(result, "Result");
    ResponseCtx resp;
    bool have_decision = false;
    for (const auto &c : result.children) {
        reader.check_ns(c);
        if (c.name == "Decision") {
            const std::string text = Reader::leaf_text(c);
            try {
                resp.decision = decision_from_string(text);
            } catch (const Error &) {
                throw ParseError("unsupported-id", c.line, "Decision '" + text + "'");
            }
            have_decision = true;
        } else if (c.name == "Status") {
            resp.status = Reader::leaf_text(c);
        } else {
            Reader::unexpected(c, result.name);
        }
    }
    if (!have_decision) throw ParseError("unexpected-element", result.line, "Result without Decision");
    return resp;
}

std::string serialize_response(const ResponseCtx &resp) {
    Writer w;
    w.open("Response", {{"xmlns", uri::kContextNs}});
    w.open("Result");
    w.leaf("Decision", to_string(resp.decision));
    w.leaf("Status", resp.status);
    w.close("Result");
    w.close("Response");
    return w.take();
}

} // namespace prbac::xml
