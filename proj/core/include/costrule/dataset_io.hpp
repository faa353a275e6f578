#pragma once

#include "costrule/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace costrule {

// Name->role mapping for delimited input. Column order in the file is free.
struct Schema {
  std::string treatment;
  std::string cost;
  std::string outcome;
  std::vector<std::string> covariates; // defines the order of W
  std::vector<std::string> decision;   // subset of covariates defining V(W)
};

// Header-first delimited text; separator (comma or tab) is auto-detected
// from the header line. Throws ParseError with the offending row index.
Dataset load_dataset(const std::string& path, const Schema& schema);
Dataset read_dataset(std::istream& in, const Schema& schema, const std::string& origin);

// Writes covariates w1..wp, then t,c,y, with round-trip exact doubles.
void write_dataset(const Dataset& ds, const std::string& path);
void write_dataset(const Dataset& ds, std::ostream& out);

// Schema matching write_dataset's column naming, V taken from ds.v_index().
Schema default_schema(std::size_t dim_w, const std::vector<std::size_t>& v_index);

} // namespace costrule
