package com.toy.data;

import java.util.ArrayList;
import java.util.List;

public class OrderRepository {
    private final Database db = new Database();
    private final List<Order> rows = new ArrayList<>();

    public void save(Order order) {
        rows.add(order);
    }

    public List<Order> all() {
        return rows;
    }
}
