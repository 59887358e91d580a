// Copyright 2026 The PlantPulse Authors
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

#include "plantpulse/query/predefined.h"

namespace plantpulse::query {

namespace {

const PredefinedQuery kQueries[] = {
    {"recent-products-cutting",
     "Average temperature and noise at the Cutting Machine while each of the 10 most recently "
     "finished production order positions was processed there",
     "SELECT H.ID AS ORDER_ID, H.PRODUCT_ID AS PRODUCT_ID, P.LEFT_AT AS LEFT_AT,\n"
     "       AVG(S.TEMPERATURE_VALUE) AS AVG_TEMP, AVG(S.NOISE_VALUE) AS AVG_NOISE\n"
     "FROM PRODUCTION_ORDER_POSITION P\n"
     "JOIN WORKPLACE W ON P.WORKPLACE_ID = W.ID\n"
     "JOIN PRODUCTION_ORDER_HEAD H ON P.HEAD_ID = H.ID\n"
     "JOIN SENSOR_DATA S ON S.WORKPLACE_ID = P.WORKPLACE_ID\n"
     "  AND S.DATE BETWEEN P.ENTERED_AT AND P.LEFT_AT\n"
     "WHERE W.NAME = 'Cutting Machine'\n"
     "GROUP BY H.ID, H.PRODUCT_ID, P.LEFT_AT\n"
     "ORDER BY P.LEFT_AT DESC\n"
     "LIMIT 10"},
    {"vibration-by-supplier",
     "Average vibration at the Assembly workplace by supplier of the material used in each "
     "production order",
     "SELECT SU.NAME AS SUPPLIER, AVG(S.VIBRATION_VALUE) AS AVG_VIBRATION\n"
     "FROM PRODUCTION_ORDER_POSITION P\n"
     "JOIN WORKPLACE W ON P.WORKPLACE_ID = W.ID\n"
     "JOIN PRODUCTION_ORDER_HEAD H ON P.HEAD_ID = H.ID\n"
     "JOIN PURCHASE_ORDER_ITEM PI ON H.PURCHASE_ORDER_ITEM_ID = PI.ID\n"
     "JOIN PURCHASE_ORDER_HEAD PH ON PI.HEAD_ID = PH.ID\n"
     "JOIN SUPPLIER SU ON PH.SUPPLIER_ID = SU.ID\n"
     "JOIN SENSOR_DATA S ON S.WORKPLACE_ID = P.WORKPLACE_ID\n"
     "  AND S.DATE BETWEEN P.ENTERED_AT AND P.LEFT_AT\n"
     "WHERE W.NAME = 'Assembly'\n"
     "GROUP BY SU.NAME\n"
     "ORDER BY SU.NAME"},
};

}  // namespace

std::span<const PredefinedQuery> predefined() { return kQueries; }

}  // namespace plantpulse::query
