package com.toy.data;

public class CustomerRepository {
    private final Database db = new Database();

    public Customer byId(String id) {
        return null;
    }
}
