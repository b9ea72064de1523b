#include "pca/trace_format.hpp"

#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace pca {
namespace {

std::string fmt_ext(const ExtRat& e) {
  return e.is_infinite() ? "inf" : format_rat(e.value());
}

const Buyer* virtual_buyer_of(const Market& m, int seller_id) {
  for (auto& b : m.buyers)
    if (b.is_virtual && b.virtual_seller == seller_id) return &b;
  return nullptr;
}

}  // namespace

std::string trace_table(const Trace& t, const Market& m) {
  std::vector<int> real_buyers, sellers;
  for (auto& b : m.buyers)
    if (!b.is_virtual) real_buyers.push_back(b.id);
  for (auto& s : m.sellers) sellers.push_back(s.id);

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head{"l"};
  for (int i : real_buyers) {
    std::string tag = std::to_string(i);
    head.push_back("c_" + tag);
    head.push_back("d_" + tag);
    head.push_back("xi_" + tag);
  }
  for (int j : sellers) {
    std::string tag = std::to_string(j);
    head.push_back("s_" + tag);
    head.push_back("dr_" + tag);
    head.push_back("c_v" + tag);
  }
  rows.push_back(head);

  for (auto& it : t.iters) {
    std::vector<std::string> row{std::to_string(it.iter)};
    for (int i : real_buyers) {
      row.push_back(format_rat(it.clocks.at(i)));
      row.push_back(fmt_ext(it.demands.at(i)));
      Rat xi = 0;
      for (auto& cr : it.clinches)
        if (cr.buyer_id == i) xi += cr.xi.sum();
      row.push_back(xi == 0 ? "-" : format_rat(xi));
    }
    for (int j : sellers) {
      row.push_back(format_rat(it.stocks_end.at(j)));
      Rat dr = it.dr.count(j) ? it.dr.at(j) : Rat(0);
      row.push_back(dr == 0 ? "-" : format_rat(dr));
      const Buyer* vb = virtual_buyer_of(m, j);
      row.push_back(vb ? format_rat(it.clocks.at(vb->id)) : "-");
    }
    rows.push_back(std::move(row));
  }

  std::vector<size_t> width(rows[0].size(), 0);
  for (auto& row : rows)
    for (size_t k = 0; k < row.size(); ++k) width[k] = std::max(width[k], row[k].size());
  std::ostringstream os;
  for (auto& row : rows) {
    for (size_t k = 0; k < row.size(); ++k)
      os << (k ? "  " : "") << std::setw(static_cast<int>(width[k])) << row[k];
    os << "\n";
  }
  return os.str();
}

std::string trace_json(const Trace& t, const Market& m) {
  nlohmann::json doc = nlohmann::json::array();
  for (auto& it : t.iters) {
    nlohmann::json ji;
    ji["iteration"] = it.iter;
    ji["bumped_buyer"] = it.bumped_buyer;
    for (auto& [i, c] : it.clocks) ji["clocks"][std::to_string(i)] = format_rat(c);
    for (auto& [i, d] : it.demands) ji["demands"][std::to_string(i)] = fmt_ext(d);
    for (auto& [i, d] : it.demands_after)
      ji["demands_after"][std::to_string(i)] = fmt_ext(d);
    ji["clinches"] = nlohmann::json::array();
    for (auto& cr : it.clinches) {
      nlohmann::json jc{{"buyer", cr.buyer_id}, {"clock", format_rat(cr.clock)}};
      for (auto& [e, v] : cr.xi.entries()) jc["xi"][std::to_string(e)] = format_rat(v);
      ji["clinches"].push_back(jc);
    }
    for (auto& [j, v] : it.dr) ji["revenue_increments"][std::to_string(j)] = format_rat(v);
    for (auto& [j, v] : it.stocks_end) ji["stocks"][std::to_string(j)] = format_rat(v);
    doc.push_back(ji);
  }
  return doc.dump(2) + "\n";
}

}  // namespace pca
