#include "pca/market_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace pca {
namespace {

using nlohmann::json;

Rat rat_from_json(const json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_rat(j.get<std::string>());
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_number_float()) {
      std::ostringstream os;
      os.precision(17);
      os << j.get<double>();
      return parse_rat(os.str());
    }
  } catch (const std::exception& e) {
    throw std::invalid_argument(where + ": " + e.what());
  }
  throw std::invalid_argument(where + ": expected rational");
}

ExtRat extrat_from_json(const json& j, const std::string& where) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return ExtRat::infinity();
  }
  return ExtRat(rat_from_json(j, where));
}

json rat_to_json(const Rat& r) {
  return json{{"value", format_rat(r)}, {"approx", format_decimal(r)}};
}

std::string field(const std::string& a, const std::string& b) { return a + "." + b; }

}  // namespace

Market parse_market(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("market file: ") + e.what());
  }
  Market m;
  int auto_edge = 0;
  for (auto& [idx, jb] : doc.at("buyers").items()) {
    std::string where = "buyers[" + idx + "]";
    Buyer b;
    b.id = jb.at("id").get<int>();
    b.bid = rat_from_json(jb.at("bid"), field(where, "bid"));
    if (jb.contains("valuation"))
      b.valuation = rat_from_json(jb["valuation"], field(where, "valuation"));
    if (jb.contains("budget_curve")) {
      std::vector<std::pair<Rat, Rat>> pts;
      for (auto& jp : jb["budget_curve"])
        pts.emplace_back(rat_from_json(jp.at(0), field(where, "budget_curve.x")),
                         rat_from_json(jp.at(1), field(where, "budget_curve.y")));
      try {
        b.budget_curve = BudgetCurve(pts);
      } catch (const std::exception& e) {
        throw std::invalid_argument(field(where, "budget_curve") + ": " + e.what());
      }
      b.budget = ExtRat::infinity();  // curve governs affordability
    } else {
      b.budget = extrat_from_json(jb.at("budget"), field(where, "budget"));
    }
    m.buyers.push_back(std::move(b));
  }
  std::vector<json> seller_specs;
  for (auto& [idx, js] : doc.at("sellers").items()) {
    std::string where = "sellers[" + idx + "]";
    Seller s;
    s.id = js.at("id").get<int>();
    s.reserve = rat_from_json(js.at("reserve"), field(where, "reserve"));
    m.sellers.push_back(std::move(s));
    seller_specs.push_back(js.at("constraint"));
  }
  for (auto& [idx, je] : doc.at("edges").items()) {
    EdgeRec e;
    e.id = je.contains("id") ? je["id"].get<int>() : ++auto_edge + 1000000;
    e.buyer = je.at("buyer").get<int>();
    e.seller = je.at("seller").get<int>();
    m.edges.push_back(e);
  }
  for (size_t k = 0; k < m.sellers.size(); ++k) {
    auto& s = m.sellers[k];
    const json& jc = seller_specs[k];
    std::string where = "sellers[" + std::to_string(k) + "].constraint";
    ConstraintSpec spec;
    spec.family = jc.at("family").get<std::string>();
    const json params = jc.contains("params") ? jc["params"] : json::object();
    if (spec.family == "stock") {
      spec.stock = rat_from_json(params.at("stock"), field(where, "stock"));
    } else if (spec.family == "page_based") {
      for (auto& t : params.at("pages")) spec.page_slots.push_back(t.get<int>());
    } else if (spec.family == "quality_based") {
      for (auto& b : params.at("beta"))
        spec.beta.push_back(rat_from_json(b, field(where, "beta")));
    } else if (spec.family == "paged_quality") {
      for (auto& pg : params.at("pages")) {
        std::vector<Rat> betas;
        for (auto& b : pg)
          betas.push_back(rat_from_json(b, field(where, "pages")));
        spec.page_betas.push_back(std::move(betas));
      }
    } else if (spec.family == "capacity") {
      for (auto& c : params.at("caps"))
        spec.caps.push_back(rat_from_json(c, field(where, "caps")));
    } else {
      throw std::invalid_argument(where + ": unknown family " + spec.family);
    }
    GroundSet ej(m.seller_edge_ids(s.id));
    try {
      s.constraint = build_constraint(spec, ej);
    } catch (const std::exception& e) {
      throw std::invalid_argument(where + ": " + e.what());
    }
    s.spec = std::move(spec);
  }
  try {
    m.validate();
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("market file: ") + e.what());
  }
  return m;
}

Market load_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_market(ss.str());
}

std::string market_to_json(const Market& m) {
  json doc;
  doc["buyers"] = json::array();
  for (auto& b : m.buyers) {
    if (b.is_virtual) continue;
    json jb{{"id", b.id}, {"bid", format_rat(b.bid)}};
    if (b.budget_curve) {
      json pts = json::array();
      for (auto& [x, y] : b.budget_curve->points())
        if (!(x == 0 && y == 0)) pts.push_back({format_rat(x), format_rat(y)});
      jb["budget_curve"] = pts;
    } else {
      jb["budget"] = format_extrat(b.budget);
    }
    if (b.valuation) jb["valuation"] = format_rat(*b.valuation);
    doc["buyers"].push_back(jb);
  }
  doc["sellers"] = json::array();
  for (auto& s : m.sellers) {
    json jc{{"family", s.spec.family}};
    json params = json::object();
    if (s.spec.family == "stock") params["stock"] = format_rat(s.spec.stock);
    if (s.spec.family == "page_based") params["pages"] = s.spec.page_slots;
    if (s.spec.family == "quality_based") {
      json b = json::array();
      for (auto& v : s.spec.beta) b.push_back(format_rat(v));
      params["beta"] = b;
    }
    if (s.spec.family == "paged_quality") {
      json pgs = json::array();
      for (auto& pg : s.spec.page_betas) {
        json b = json::array();
        for (auto& v : pg) b.push_back(format_rat(v));
        pgs.push_back(b);
      }
      params["pages"] = pgs;
    }
    if (s.spec.family == "capacity") {
      json c = json::array();
      for (auto& v : s.spec.caps) c.push_back(format_rat(v));
      params["caps"] = c;
    }
    jc["params"] = params;
    doc["sellers"].push_back({{"id", s.id},
                              {"reserve", format_rat(s.reserve)},
                              {"constraint", jc}});
  }
  doc["edges"] = json::array();
  for (auto& e : m.edges) {
    if (m.buyer(e.buyer).is_virtual) continue;
    doc["edges"].push_back({{"id", e.id}, {"buyer", e.buyer}, {"seller", e.seller}});
  }
  return doc.dump(2) + "\n";
}

void save_market(const Market& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << market_to_json(m);
}

std::string allocation_to_json(const Allocation& a, const Market& m) {
  json doc;
  doc["transactions"] = json::array();
  for (auto& [e, v] : a.w.entries()) {
    auto& er = m.edge(e);
    json t = rat_to_json(v);
    t["edge"] = e;
    t["buyer"] = er.buyer;
    t["seller"] = er.seller;
    doc["transactions"].push_back(t);
  }
  doc["payments"] = json::array();
  for (auto& [i, v] : a.p) {
    json t = rat_to_json(v);
    t["buyer"] = i;
    doc["payments"].push_back(t);
  }
  doc["revenues"] = json::array();
  for (auto& [j, v] : a.r) {
    json t = rat_to_json(v);
    t["seller"] = j;
    doc["revenues"].push_back(t);
  }
  return doc.dump(2) + "\n";
}

void save_allocation(const Allocation& a, const Market& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << allocation_to_json(a, m);
}

Allocation load_allocation(const std::string& path, const Market& m) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("allocation file: ") + e.what());
  }
  Allocation a;
  for (auto& t : doc.at("transactions")) {
    int e = t.at("edge").get<int>();
    m.edge(e);  // lookup error if unknown
    a.w.set(e, rat_from_json(t.at("value"), "transactions.value"));
  }
  for (auto& t : doc.at("payments"))
    a.p[t.at("buyer").get<int>()] = rat_from_json(t.at("value"), "payments.value");
  for (auto& t : doc.at("revenues"))
    a.r[t.at("seller").get<int>()] = rat_from_json(t.at("value"), "revenues.value");
  return a;
}

}  // namespace pca
