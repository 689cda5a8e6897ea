package com.toy.data;

public class Database {
    public static final String NAME = "toy";
}
