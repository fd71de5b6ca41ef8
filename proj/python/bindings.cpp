#include "nextmethod/corpus.hpp"
#include "nextmethod/evaluation.hpp"
#include "nextmethod/model.hpp"
#include "nextmethod/recommender.hpp"
#include "nextmethod/rules.hpp"
#include "nextmethod/similarity.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace nextmethod;

namespace {

std::map<std::string, std::uint32_t> as_dict(const TermVector& v) {
    return {v.terms().begin(), v.terms().end()};
}

TermVector from_dict(const std::map<std::string, std::uint32_t>& d) { return TermVector({d.begin(), d.end()}); }

ItemSet items(const std::vector<std::uint32_t>& ids) {
    ItemSet s;
    for (auto i : ids) s.push_back(ClusterId{i});
    normalize(s);
    return s;
}

std::vector<std::uint32_t> ids(const ItemSet& s) {
    std::vector<std::uint32_t> out;
    for (ClusterId c : s) out.push_back(c.value);
    return out;
}

py::dict rule_dict(const AssociationRule& r) {
    py::dict d;
    d["lhs"] = ids(r.lhs);
    d["rhs"] = r.rhs.value;
    d["support"] = r.support;
    d["confidence"] = r.confidence;
    d["count"] = r.count;
    d["lhs_count"] = r.lhs_count;
    return d;
}

py::dict report_dict(const EvalReport& r) {
    py::dict d;
    for (const auto& [label, value] : report_rows(r)) d[py::str(label)] = value;
    return d;
}

ParsedCorpus parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse_corpus(in);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Next-method recommendation core";

    py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);

    py::class_<Callable>(m, "Callable")
        .def_readonly("name", &Callable::name)
        .def_readonly("signature", &Callable::signature)
        .def_readonly("source_text", &Callable::source_text)
        .def_readonly("line_count", &Callable::line_count)
        .def("__repr__", [](const Callable& c) { return "<Callable " + c.signature + ">"; });

    m.def("extract_callables", [](const std::string& source) { return extract_callables(source).callables; },
          py::arg("source"), "Methods and constructors declared in a Java source file, in textual order.");

    m.def("tokenize", &tokenize, py::arg("source"));
    m.def("split_identifier", &split_identifier, py::arg("identifier"));
    m.def("term_vector", [](const std::string& source) { return as_dict(method_terms(source)); }, py::arg("source"));
    m.def("similarity", [](const std::map<std::string, std::uint32_t>& a,
                           const std::map<std::string, std::uint32_t>& b) { return similarity(from_dict(a), from_dict(b)); },
          py::arg("a"), py::arg("b"));
    m.def("method_similarity",
          [](const std::string& a, const std::string& b) { return similarity(method_terms(a), method_terms(b)); },
          py::arg("a"), py::arg("b"));
    m.def(
        "token_distance",
        [](const TokenSequence& actual, const TokenSequence& recommended) {
            const auto d = token_distance(actual, recommended);
            return py::make_tuple(d.count, d.pct);
        },
        py::arg("actual"), py::arg("recommended"));

    m.def("support_floor", &support_floor, py::arg("min_support"), py::arg("n"));
    m.def(
        "mine_rules",
        [](const std::vector<std::vector<std::uint32_t>>& transactions, double min_support, double min_confidence,
           std::size_t max_lhs) {
            std::vector<Transaction> txs;
            for (const auto& t : transactions) txs.push_back(Transaction{items(t), {}, {}});
            py::list out;
            for (const auto& r : mine_rules(txs, MiningParams{min_support, min_confidence, max_lhs}))
                out.append(rule_dict(r));
            return out;
        },
        py::arg("transactions"), py::arg("min_support"), py::arg("min_confidence"), py::arg("max_lhs") = 2);

    py::class_<ModelConfig>(m, "ModelConfig")
        .def(py::init<>())
        .def_readwrite("lambda_", &ModelConfig::lambda)
        .def_readwrite("gamma", &ModelConfig::gamma)
        .def_readwrite("min_support", &ModelConfig::min_support)
        .def_readwrite("min_confidence", &ModelConfig::min_confidence)
        .def_readwrite("max_lhs", &ModelConfig::max_lhs)
        .def_readonly("training_commits", &ModelConfig::training_commits)
        .def_readonly("training_transactions", &ModelConfig::training_transactions);

    py::class_<Model>(m, "Model")
        .def_static("load", py::overload_cast<const std::filesystem::path&>(&load_model), py::arg("path"))
        .def_static(
            "build",
            [](const std::string& corpus_jsonl, const ModelConfig& config) {
                auto commits = mine_commits(parse_text(corpus_jsonl).commits);
                py::gil_scoped_release release;
                return build_model(commits, config);
            },
            py::arg("corpus_jsonl"), py::arg("config"))
        .def("save", py::overload_cast<const Model&, const std::filesystem::path&>(&save_model), py::arg("path"))
        .def_property_readonly("config", &Model::config)
        .def_property_readonly("cluster_count", [](const Model& mo) { return mo.clusters().size(); })
        .def_property_readonly("rules",
                               [](const Model& mo) {
                                   py::list out;
                                   for (const auto& r : mo.rules()) out.append(rule_dict(r));
                                   return out;
                               })
        .def("centroid_source", [](const Model& mo, std::uint32_t c) { return mo.centroid(ClusterId{c}).source_text; })
        .def(
            "assign",
            [](const Model& mo, const std::string& source) -> std::optional<std::uint32_t> {
                auto match = assign_cluster(source, mo, mo.config().gamma);
                if (!match) return std::nullopt;
                return match->cluster.value;
            },
            py::arg("source"))
        .def(
            "recommend",
            [](const Model& mo, const std::string& editor_text) {
                std::vector<MatchedMethod> matched;
                for (const auto& c : extract_callables(editor_text).callables)
                    if (auto hit = assign_cluster(c.source_text, mo, mo.config().gamma))
                        matched.push_back(MatchedMethod{c.signature, hit->cluster});
                py::list out;
                for (const auto& r : recommend(matched, mo)) {
                    py::dict d;
                    d["rhs_cluster"] = r.rhs_cluster.value;
                    d["code"] = r.code;
                    d["confidence"] = r.confidence;
                    d["lhs_signatures"] = r.lhs_signatures;
                    d["provenance_comment"] = provenance_comment(r);
                    out.append(d);
                }
                return out;
            },
            py::arg("editor_text"));

    m.def(
        "evaluate",
        [](const Model& model, const std::string& corpus_jsonl, const std::string& block) {
            auto parsed = parse_text(corpus_jsonl);
            extract_added_methods(parsed.commits);
            auto split = time_split(std::move(parsed.commits));
            auto& chosen = block == "train" ? split.train : block == "validation" ? split.validation : split.test;
            const auto commits = filter_commits(std::move(chosen));
            return report_dict(compute_metrics(simulate_commits(commits, model)));
        },
        py::arg("model"), py::arg("corpus_jsonl"), py::arg("block") = "test");
}
